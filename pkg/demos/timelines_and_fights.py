"""Windowed metrics and team-fight detection on a scripted feeder match.

Shows the 20 s contribution series (the bars the replay timeline renders as
"Inactive" when low), the exact gold partition, and the clustered team
fights with their participants.
"""

from grieferlens.metrics import contribution_series, detect_team_fights, gold_series, stage_of
from grieferlens.simgen import Injection, Scenario, generate_match
from grieferlens.telemetry import parse_match

telemetry, truth = generate_match(
    Scenario(seed=99, injections=(Injection("P07", "feeding"),))
)
match = parse_match(telemetry)
print(f"match {match.match_id}, duration {match.duration_s:.0f} s\n")


def sparkline(values):
    blocks = " .:-=+*#%@"
    return "".join(blocks[min(int(v * (len(blocks) - 1)), len(blocks) - 1)] for v in values)


for pid in ("P02", "P07"):
    series = contribution_series(match, pid)
    gold = gold_series(match, pid)
    print(f"{pid} contribution per 20 s window ({len(series.values)} windows):")
    print(f"  {sparkline(series.values)}")
    low = [k for k, v in enumerate(series.values) if v < 0.05]
    print(f"  windows below 0.05: {len(low)}   total gold: {sum(gold.values):.0f}\n")

fights = detect_team_fights(match)
print(f"{len(fights)} combat clusters detected; the scheduled river fights:")
for fight in fights:
    if len(fight.participants) < 6:
        continue  # skirmish trades cluster too; the big ones are the set pieces
    stage = stage_of(fight.t_start, match.duration_s)
    print(
        f"  [{fight.t_start:7.1f}, {fight.t_end:7.1f}] {stage:<6}"
        f" centroid ({fight.centroid[0]:.2f}, {fight.centroid[1]:.2f})"
        f" participants {len(fight.participants)}"
    )
missing = {"P07"} - set().union(*(f.participants for f in fights if len(f.participants) >= 6))
print(f"\nabsent from every set-piece fight: {sorted(missing) or 'nobody'}")
