import math

import numpy as np
import pytest
from shapely.geometry import LineString, Point

from grieferlens.errors import BadWindow, OutOfBounds
from grieferlens.spatial import (
    ZONE_IDS,
    classify_zone,
    default_layout,
    dwell_heatmap,
    enemy_jungle,
    layout_from_dict,
    own_fountain,
    own_jungle,
    path_displacement,
    trajectory,
    zone_occupancy,
)
from grieferlens.telemetry import parse_match, position_at

from conftest import minimal_doc, dump_doc


@pytest.fixture(scope="module")
def layout():
    return default_layout()


def test_layout_has_ten_zone_ids(layout):
    assert len(layout.zone_ids) == 10
    assert set(layout.zone_ids) == set(ZONE_IDS)


def test_layout_priority_levels(layout):
    assert len(layout.priority_levels()) == 6


def test_classify_fountain_center(layout):
    assert classify_zone(layout, 0.03, 0.03) == "fountain_blue"
    assert classify_zone(layout, 0.97, 0.97) == "fountain_red"


def test_classify_map_center_is_river(layout):
    assert classify_zone(layout, 0.5, 0.5) == "river"


def test_classify_jungle_pocket_against_shapely_oracle(layout):
    # independently verify that (0.7, 0.2) misses every corridor and falls to
    # the blue-side jungle
    point = Point(0.7, 0.2)
    corridors = {
        "river": (LineString([(0.05, 0.95), (0.95, 0.05)]), 0.05),
        "mid_lane": (LineString([(0.05, 0.05), (0.95, 0.95)]), 0.06),
        "top_lane": (LineString([(0.05, 0.05), (0.05, 0.95), (0.95, 0.95)]), 0.07),
        "bot_lane": (LineString([(0.05, 0.05), (0.95, 0.05), (0.95, 0.95)]), 0.07),
    }
    for name, (line, half_width) in corridors.items():
        assert point.distance(line) > half_width, name
    assert math.hypot(0.7 - 0.03, 0.2 - 0.03) > 0.04
    assert 0.7 + 0.2 < 1.0
    assert classify_zone(layout, 0.7, 0.2) == "jungle_blue"


def test_corridor_membership_matches_shapely(layout):
    rng = np.random.default_rng(7)
    line = LineString([(0.05, 0.05), (0.05, 0.95), (0.95, 0.95)])
    corridor = next(z for z in layout.zones if z.zone_id == "top_lane").geometry
    pts = rng.random((500, 2))
    mine = corridor.contains_many(pts[:, 0], pts[:, 1])
    for (x, y), inside in zip(pts, mine):
        assert inside == (Point(x, y).distance(line) <= 0.07)


def test_classification_total_coverage(layout):
    rng = np.random.default_rng(42)
    pts = rng.random((10_000, 2))
    idx = layout.classify_many(pts[:, 0], pts[:, 1])
    assert (idx >= 0).all()
    names = {layout.zone_ids[i] for i in set(idx.tolist())}
    assert {"jungle_blue", "jungle_red"} <= names


def test_out_of_bounds_point(layout):
    with pytest.raises(OutOfBounds):
        classify_zone(layout, 1.2, 0.5)


def test_relative_zone_names():
    assert own_fountain("blue") == "fountain_blue"
    assert own_jungle("red") == "jungle_red"
    assert enemy_jungle("blue") == "jungle_red"
    assert enemy_jungle("red") == "jungle_blue"


def test_layout_json_round_trip(layout):
    rebuilt = layout_from_dict(layout.to_dict())
    rng = np.random.default_rng(3)
    pts = rng.random((1000, 2))
    assert (
        layout.classify_many(pts[:, 0], pts[:, 1])
        == rebuilt.classify_many(pts[:, 0], pts[:, 1])
    ).all()


def test_layout_loads_from_file(layout, tmp_path):
    import json

    from grieferlens.spatial import load_layout

    path = tmp_path / "layout.json"
    path.write_text(json.dumps(layout.to_dict()))
    loaded = load_layout(str(path))
    assert loaded.zone_ids == layout.zone_ids
    assert loaded.classify(0.5, 0.5) == "river"


# ---------------------------------------------------------------------------
# dwell heatmap


def _stationary_match(x=0.5, y=0.5, duration=600.0):
    doc = minimal_doc(duration)
    doc["position_samples"] = [
        {"t": 0, "player_id": p["player_id"], "x": x, "y": y} for p in doc["players"]
    ]
    return parse_match(dump_doc(doc))


def test_dwell_stationary_window(layout):
    match = _stationary_match()
    hm = dwell_heatmap(match, layout, "P01", 100.0, 140.0)
    assert (hm.cells > 0).sum() == 1
    assert hm.cells.max() == 41.0
    assert hm.total_seconds() == 41.0


def test_dwell_empty_window_single_tick(layout):
    match = _stationary_match()
    hm = dwell_heatmap(match, layout, "P01", 100.0, 100.0)
    assert hm.total_seconds() == 1.0


def test_dwell_diagonal_mover_against_brute_force(layout):
    doc = minimal_doc(duration=80)
    doc["position_samples"] = [
        {"t": 0, "player_id": p["player_id"], "x": 0.1, "y": 0.1} for p in doc["players"]
    ]
    doc["position_samples"].append({"t": 80, "player_id": "P01", "x": 0.9, "y": 0.9})
    match = parse_match(dump_doc(doc))
    hm = dwell_heatmap(match, layout, "P01", 0.0, 80.0, grid_n=2)
    # independent tick-by-tick accumulation straight from the definition
    expected = np.zeros((2, 2))
    for k in range(81):
        x, y = position_at(match, "P01", float(k))
        expected[min(int(x * 2), 1), min(int(y * 2), 1)] += 1.0
    assert np.array_equal(hm.cells, expected)
    assert hm.cells[0, 0] in (40.0, 41.0)
    assert hm.cells[1, 1] in (40.0, 41.0)
    assert hm.cells[0, 1] == 0.0 and hm.cells[1, 0] == 0.0


def test_dwell_clamps_edge_coordinate(layout):
    match = _stationary_match(x=1.0, y=1.0)
    hm = dwell_heatmap(match, layout, "P01", 0.0, 10.0, grid_n=8)
    assert hm.cells[7, 7] == 11.0


def test_dwell_bad_window(layout):
    match = _stationary_match()
    with pytest.raises(BadWindow):
        dwell_heatmap(match, layout, "P01", 50.0, 40.0)
    with pytest.raises(BadWindow):
        dwell_heatmap(match, layout, "P01", 0.0, 1e9)


def test_dwell_monotone_in_window(layout):
    doc = minimal_doc(duration=300)
    doc["position_samples"] = [
        {"t": 0, "player_id": p["player_id"], "x": 0.2, "y": 0.2} for p in doc["players"]
    ]
    doc["position_samples"].append({"t": 300, "player_id": "P01", "x": 0.8, "y": 0.3})
    match = parse_match(dump_doc(doc))
    small = dwell_heatmap(match, layout, "P01", 50.0, 120.0)
    large = dwell_heatmap(match, layout, "P01", 20.0, 200.0)
    assert (large.cells >= small.cells).all()


# ---------------------------------------------------------------------------
# zone occupancy


def test_occupancy_stationary_fountain(layout):
    match = _stationary_match(0.03, 0.03)
    occ = zone_occupancy(match, layout, "P01", 100.0, 160.0)
    assert occ["fountain_blue"] == 61.0
    assert sum(occ.values()) == 61.0


def test_occupancy_dead_window_is_zero(layout):
    doc = minimal_doc()
    doc["position_samples"] = [
        {"t": 0, "player_id": p["player_id"], "x": 0.5, "y": 0.5} for p in doc["players"]
    ]
    doc["events"] = [
        {"t": 50, "kind": "kill", "actor": "P06", "victim": "P01", "assists": [], "x": 0.5, "y": 0.5},
        {"t": 200, "kind": "respawn", "actor": "P01"},
    ]
    match = parse_match(dump_doc(doc))
    occ = zone_occupancy(match, layout, "P01", 60.0, 190.0)
    assert all(v == 0.0 for v in occ.values())


def test_occupancy_mid_walker_against_brute_force(layout):
    doc = minimal_doc(duration=60)
    doc["position_samples"] = [
        {"t": 0, "player_id": p["player_id"], "x": 0.2, "y": 0.2} for p in doc["players"]
    ]
    doc["position_samples"].append({"t": 60, "player_id": "P01", "x": 0.8, "y": 0.8})
    match = parse_match(dump_doc(doc))
    occ = zone_occupancy(match, layout, "P01", 0.0, 60.0)
    expected: dict[str, float] = {}
    for k in range(61):
        x, y = position_at(match, "P01", float(k))
        zone = classify_zone(layout, x, y)
        expected[zone] = expected.get(zone, 0.0) + 1.0
    for zone, seconds in expected.items():
        assert occ[zone] == seconds
    assert occ["mid_lane"] + occ["river"] == 61.0
    assert occ["river"] == expected["river"]


# ---------------------------------------------------------------------------
# trajectory / displacement


def test_trajectory_alive_window(layout):
    match = _stationary_match()
    lines = trajectory(match, "P01", 10.0, 40.0)
    assert len(lines) == 1
    assert len(lines[0]) == 31


def test_trajectory_split_at_death():
    doc = minimal_doc()
    doc["position_samples"] = [
        {"t": 0, "player_id": p["player_id"], "x": 0.5, "y": 0.5} for p in doc["players"]
    ]
    doc["events"] = [
        {"t": 100, "kind": "kill", "actor": "P06", "victim": "P01", "assists": [], "x": 0.5, "y": 0.5},
        {"t": 130, "kind": "respawn", "actor": "P01"},
    ]
    match = parse_match(dump_doc(doc))
    lines = trajectory(match, "P01", 80.0, 160.0)
    assert len(lines) == 2


def test_trajectory_point_window():
    match = _stationary_match()
    lines = trajectory(match, "P01", 42.0, 42.0)
    assert len(lines) == 1 and len(lines[0]) == 1


def test_path_displacement_stationary():
    match = _stationary_match()
    assert path_displacement(match, "P01", 0.0, 100.0) == (0.0, 0.0)


def test_path_displacement_straight_line():
    doc = minimal_doc(duration=100)
    doc["position_samples"] = [
        {"t": 0, "player_id": p["player_id"], "x": 0.0, "y": 0.0} for p in doc["players"]
    ]
    doc["position_samples"].append({"t": 100, "player_id": "P01", "x": 0.3, "y": 0.4})
    match = parse_match(dump_doc(doc))
    net, path = path_displacement(match, "P01", 0.0, 100.0)
    assert net == pytest.approx(0.5)
    assert path == pytest.approx(0.5)


def test_path_displacement_out_and_back():
    doc = minimal_doc(duration=100)
    doc["position_samples"] = [
        {"t": 0, "player_id": p["player_id"], "x": 0.0, "y": 0.0} for p in doc["players"]
    ]
    doc["position_samples"].append({"t": 50, "player_id": "P01", "x": 0.2, "y": 0.0})
    doc["position_samples"].append({"t": 100, "player_id": "P01", "x": 0.0, "y": 0.0})
    match = parse_match(dump_doc(doc))
    net, path = path_displacement(match, "P01", 0.0, 100.0)
    assert net == pytest.approx(0.0)
    assert path == pytest.approx(0.4)
    assert path >= net >= 0


def test_heatmap_occupancy_conservation(layout):
    doc = minimal_doc()
    doc["position_samples"] = [
        {"t": 0, "player_id": p["player_id"], "x": 0.1, "y": 0.6} for p in doc["players"]
    ]
    doc["position_samples"].append({"t": 600, "player_id": "P01", "x": 0.9, "y": 0.2})
    doc["events"] = [
        {"t": 150, "kind": "kill", "actor": "P06", "victim": "P01", "assists": [], "x": 0.5, "y": 0.5},
        {"t": 190, "kind": "respawn", "actor": "P01"},
    ]
    match = parse_match(dump_doc(doc))
    hm = dwell_heatmap(match, layout, "P01", 100.0, 400.0)
    occ = zone_occupancy(match, layout, "P01", 100.0, 400.0)
    alive_ticks = 0
    for k in range(301):
        t = 100.0 + k
        if t <= 150.0 or t >= 190.0:
            alive_ticks += 1
    assert hm.total_seconds() == alive_ticks
    assert sum(occ.values()) == alive_ticks
