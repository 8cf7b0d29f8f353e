"""Independent brute-force reference implementations used as test oracles."""

from __future__ import annotations

import math

from grieferlens.metrics import TeamFightParams


def brute_force_team_fights(match, params: TeamFightParams | None = None):
    """Literal re-implementation of the fight-clustering definition.

    Scans events in time order; an event joins the earliest-created cluster
    whose most recent event is within the time gap and whose centroid
    (recomputed from scratch every time) is within the cluster radius.
    Returns (t_start, t_end, centroid, participants) tuples sorted by start.
    """
    params = params or TeamFightParams()
    combat = []
    for e in match.events:
        if e.kind == "kill":
            combat.append(e)
        elif e.kind == "damage" and e.target in match.roster:
            combat.append(e)

    clusters: list[list] = []
    for e in combat:
        placed = False
        for cluster in clusters:
            newest = cluster[0].t
            for member in cluster:
                if member.t > newest:
                    newest = member.t
            if e.t - newest > params.time_gap:
                continue
            cx = sum(m.x for m in cluster) / len(cluster)
            cy = sum(m.y for m in cluster) / len(cluster)
            if math.hypot(e.x - cx, e.y - cy) <= params.cluster_radius:
                cluster.append(e)
                placed = True
                break
        if not placed:
            clusters.append([e])

    fights = []
    for cluster in clusters:
        times = [m.t for m in cluster]
        t_start, t_end = min(times), max(times)
        if t_end - t_start < params.min_duration:
            continue
        participants = set()
        for m in cluster:
            for pid in [m.actor, m.victim, m.target, *m.assists]:
                if pid is not None and pid in match.roster:
                    participants.add(pid)
        blue = sum(1 for p in participants if match.roster[p].team == "blue")
        red = sum(1 for p in participants if match.roster[p].team == "red")
        if blue < params.min_per_team or red < params.min_per_team:
            continue
        cx = sum(m.x for m in cluster) / len(cluster)
        cy = sum(m.y for m in cluster) / len(cluster)
        fights.append((t_start, t_end, (cx, cy), frozenset(participants)))
    fights.sort(key=lambda f: f[0])
    return fights
