import json

import pytest

from grieferlens.errors import BadTime, BadWindow, UnknownPlayer
from grieferlens.metrics import (
    ContributionWeights,
    TeamFightParams,
    contribution_series,
    detect_team_fights,
    gold_series,
    jungle_economy_share,
    lane_cs_stats,
    stage_of,
)
from grieferlens.simgen.rng import SplitMix64
from grieferlens.telemetry import match_from_dict, parse_match

from conftest import MatchBuilder, minimal_doc, dump_doc
from oracles import brute_force_team_fights


# ---------------------------------------------------------------------------
# contribution


def test_contribution_window_count():
    match = MatchBuilder(duration=600).build()
    series = contribution_series(match, "P01")
    assert len(series.values) == 30


def test_contribution_zero_player_with_active_teammates():
    b = MatchBuilder(duration=600)
    b.ev(25, "gold", "P02", amount=100, source="passive")
    match = b.build()
    series = contribution_series(match, "P01")
    assert series.values[1] == 0.0


def test_contribution_sole_contributor_is_one():
    b = MatchBuilder(duration=600)
    b.ev(25, "damage", "P01", target="P06", amount=77, x=0.5, y=0.5)
    match = b.build()
    assert contribution_series(match, "P01").values[1] == 1.0


def test_contribution_values_in_unit_interval_and_max_attained():
    b = MatchBuilder(duration=200)
    rng = SplitMix64(5)
    for k in range(40):
        t = k * 5 + 1
        actor = f"P0{rng.randint(1, 5)}"
        b.ev(t, "gold", actor, amount=rng.randint(10, 200), source="misc")
    match = b.build()
    all_series = {p.player_id: contribution_series(match, p.player_id) for p in match.players}
    n = len(all_series["P01"].values)
    for k in range(n):
        blue = [all_series[f"P0{i}"].values[k] for i in range(1, 6)]
        assert all(0.0 <= v <= 1.0 for v in blue)
        if any(v > 0 for v in blue):
            assert max(blue) == 1.0


def test_contribution_weights_validation():
    with pytest.raises(ValueError):
        ContributionWeights(damage=-1)
    with pytest.raises(ValueError):
        ContributionWeights(damage=0, objective_damage=0, heal=0, gold=0, cs=0)


def test_contribution_counts_objective_damage_separately():
    weights = ContributionWeights(damage=0.0, objective_damage=1.0, heal=0, gold=0, cs=0)
    b = MatchBuilder(duration=100)
    b.ev(5, "damage", "P01", target="P06", amount=500, x=0.5, y=0.5)
    b.ev(6, "damage", "P02", target="tower_red", amount=200, x=0.5, y=0.5)
    match = b.build()
    assert contribution_series(match, "P01", weights).values[0] == 0.0
    assert contribution_series(match, "P02", weights).values[0] == 1.0


# ---------------------------------------------------------------------------
# gold


def test_gold_series_empty():
    match = MatchBuilder(duration=600).build()
    assert all(v == 0.0 for v in gold_series(match, "P01").values)


def test_gold_series_bucketing():
    b = MatchBuilder(duration=600)
    b.ev(25, "gold", "P01", amount=300, source="bounty")
    match = b.build()
    series = gold_series(match, "P01")
    assert series.values[1] == 300.0
    assert sum(series.values) == 300.0


def test_gold_series_adds_cs_gold():
    b = MatchBuilder(duration=600)
    b.ev(25, "cs", "P01", source="mid", gold=20)
    b.ev(30, "gold", "P01", amount=300, source="bounty")
    match = b.build()
    assert gold_series(match, "P01").values[1] == 320.0


def test_gold_partition_is_exact():
    b = MatchBuilder(duration=600)
    rng = SplitMix64(11)
    total = 0
    for k in range(200):
        t = rng.randint(0, 600)
        amount = rng.randint(1, 40)
        total += amount
        b.ev(t, "cs", "P01", source="mid", gold=amount)
    match = b.build()
    assert sum(gold_series(match, "P01").values) == total


def test_gold_event_at_exact_duration_lands_in_last_window():
    b = MatchBuilder(duration=600)
    b.ev(600, "gold", "P01", amount=50, source="endgame")
    match = b.build()
    series = gold_series(match, "P01")
    assert series.values[-1] == 50.0


# ---------------------------------------------------------------------------
# jungle economy share


def test_jungle_share_zero_when_no_jungle_gold():
    match = MatchBuilder().build()
    assert jungle_economy_share(match, "P01", 0.0, 1200.0) == 0.0


def test_jungle_share_sole_farmer():
    b = MatchBuilder()
    for k in range(10):
        b.ev(10 * k + 5, "cs", "P05", source="jungle_blue", gold=20)
    match = b.build()
    assert jungle_economy_share(match, "P05", 0.0, 1200.0) == 1.0


def test_jungle_share_fraction():
    b = MatchBuilder()
    b.ev(10, "cs", "P03", source="jungle_blue", gold=300)
    b.ev(20, "cs", "P05", source="jungle_blue", gold=700)
    b.ev(30, "cs", "P10", source="jungle_red", gold=999)  # other team, ignored
    match = b.build()
    assert jungle_economy_share(match, "P03", 0.0, 1200.0) == pytest.approx(0.3)


def test_jungle_share_sums_to_one_per_team():
    b = MatchBuilder()
    rng = SplitMix64(3)
    for k in range(60):
        actor = f"P0{rng.randint(1, 5)}"
        b.ev(k * 10 + 1, "cs", actor, source="jungle_blue", gold=rng.randint(15, 25))
    match = b.build()
    total = sum(
        jungle_economy_share(match, f"P0{i}", 0.0, 1200.0) for i in range(1, 6)
    )
    assert total == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# lane cs stats


def test_lane_cs_zero_rows():
    match = MatchBuilder().build()
    stats = lane_cs_stats(match, "mid", 0.0, 1200.0)
    assert len(stats) == 10
    assert all(v == (0, 0.0) for v in stats.values())


def test_lane_cs_counts_and_gold():
    b = MatchBuilder()
    for k in range(10):
        b.ev(100 + k * 5, "cs", "P02", source="mid", gold=20)
    match = b.build()
    stats = lane_cs_stats(match, "mid", 0.0, 1200.0)
    assert stats["P02"] == (10, 200.0)


def test_lane_cs_window_end_exclusive():
    b = MatchBuilder()
    b.ev(200, "cs", "P02", source="mid", gold=20)
    match = b.build()
    assert lane_cs_stats(match, "mid", 0.0, 200.0)["P02"] == (0, 0.0)
    assert lane_cs_stats(match, "mid", 200.0, 300.0)["P02"] == (1, 20.0)


def test_lane_cs_bad_lane():
    match = MatchBuilder().build()
    with pytest.raises(ValueError):
        lane_cs_stats(match, "jungle_blue", 0.0, 100.0)


def test_window_errors():
    match = MatchBuilder().build()
    with pytest.raises(BadWindow):
        jungle_economy_share(match, "P01", 100.0, 50.0)
    with pytest.raises(UnknownPlayer):
        jungle_economy_share(match, "P99", 0.0, 100.0)


# ---------------------------------------------------------------------------
# team fights


def _burst(b, t0, actors, targets, n=12, spacing=7.0 / 11, x=0.5, y=0.5):
    for i in range(n):
        b.ev(
            t0 + spacing * i,
            "damage",
            actors[i % len(actors)],
            target=targets[i % len(targets)],
            amount=50,
            x=x,
            y=y,
        )


def test_no_events_no_fights():
    match = MatchBuilder().build()
    assert detect_team_fights(match) == []


def test_single_burst_single_fight():
    b = MatchBuilder()
    _burst(b, 100.0, ["P01", "P02"], ["P06", "P07"])
    match = b.build()
    fights = detect_team_fights(match)
    assert len(fights) == 1
    fight = fights[0]
    assert fight.t_start == pytest.approx(100.0)
    assert fight.t_end == pytest.approx(107.0)
    assert fight.participants == frozenset({"P01", "P02", "P06", "P07"})
    assert fight.centroid == (pytest.approx(0.5), pytest.approx(0.5))


def test_two_bursts_two_fights():
    b = MatchBuilder()
    _burst(b, 100.0, ["P01", "P02"], ["P06", "P07"])
    _burst(b, 400.0, ["P01", "P02"], ["P06", "P07"])
    match = b.build()
    assert len(detect_team_fights(match)) == 2


def test_short_burst_discarded():
    b = MatchBuilder()
    _burst(b, 100.0, ["P01", "P02"], ["P06", "P07"], n=4, spacing=0.5)
    match = b.build()
    assert detect_team_fights(match) == []


def test_one_vs_one_discarded():
    b = MatchBuilder()
    _burst(b, 100.0, ["P01"], ["P06"])
    match = b.build()
    assert detect_team_fights(match) == []


def test_fight_detection_is_deterministic_and_participants_appear():
    b = MatchBuilder()
    _burst(b, 100.0, ["P01", "P02", "P04"], ["P06", "P07"])
    b.kill(107.8, "P06", "P01", assists=["P07"])
    match = b.build()
    first = detect_team_fights(match)
    second = detect_team_fights(match)
    assert first == second
    fight = first[0]
    for pid in fight.participants:
        assert any(
            pid in (e.actor, e.victim, e.target) or pid in e.assists
            for e in match.events
        )


def test_removing_nonparticipant_events_keeps_fights():
    b = MatchBuilder()
    _burst(b, 100.0, ["P01", "P02"], ["P06", "P07"])
    b.ev(300, "cs", "P03", source="bot", gold=20)
    b.ev(500, "damage", "P03", target="P08", amount=10, x=0.9, y=0.1)
    match_full = b.build()
    fights_full = detect_team_fights(match_full)
    doc = minimal_doc(1200.0)
    doc["position_samples"] = []
    # rebuild without P03's events
    b2 = MatchBuilder()
    _burst(b2, 100.0, ["P01", "P02"], ["P06", "P07"])
    match_pruned = b2.build()
    fights_pruned = detect_team_fights(match_pruned)
    kept = [f for f in fights_full if "P03" not in f.participants]
    assert [(f.t_start, f.t_end, f.participants) for f in kept] == [
        (f.t_start, f.t_end, f.participants) for f in fights_pruned
    ]


def _random_combat_match(seed: int):
    rng = SplitMix64(seed)
    b = MatchBuilder(duration=600, match_id=f"t-fight-{seed}")
    n = rng.randint(5, 30)
    t = 0.0
    ids = [f"P{i:02d}" for i in range(1, 11)]
    for _ in range(n):
        t += rng.uniform(0.2, 12.0)
        if t >= 595:
            break
        actor = rng.choice(ids)
        target = rng.choice([p for p in ids if p != actor])
        x, y = round(rng.uniform(0.2, 0.8), 3), round(rng.uniform(0.2, 0.8), 3)
        if rng.randint(0, 4) == 0:
            b.kill(round(t, 2), actor, target, x=x, y=y)
        else:
            b.ev(round(t, 2), "damage", actor, target=target, amount=rng.randint(10, 99), x=x, y=y)
    return b.build()


@pytest.mark.parametrize("seed", range(50))
def test_greedy_matches_brute_force_oracle(seed):
    match = _random_combat_match(seed)
    params = TeamFightParams()
    mine = detect_team_fights(match, params)
    reference = brute_force_team_fights(match, params)
    assert len(mine) == len(reference)
    for fight, (t_start, t_end, centroid, participants) in zip(mine, reference):
        assert fight.t_start == pytest.approx(t_start)
        assert fight.t_end == pytest.approx(t_end)
        assert fight.centroid[0] == pytest.approx(centroid[0])
        assert fight.centroid[1] == pytest.approx(centroid[1])
        assert fight.participants == participants


# ---------------------------------------------------------------------------
# stage_of


def test_stage_of_boundaries():
    assert stage_of(0.0, 900.0) == "early"
    assert stage_of(900.0, 900.0) == "late"
    assert stage_of(450.0, 900.0) == "mid"
    assert stage_of(299.99, 900.0) == "early"
    assert stage_of(300.0, 900.0) == "mid"


def test_stage_of_bad_time():
    with pytest.raises(BadTime):
        stage_of(-1.0, 900.0)
    with pytest.raises(BadTime):
        stage_of(901.0, 900.0)
