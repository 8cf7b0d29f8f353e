"""Generate a scripted match with an injected griefer and read the verdicts.

The simulator drives ten waypoint agents through lanes, jungle circuits,
recalls, and four river fights; here we make the blue support steal the
team's jungle in the late game while skipping every fight, then run the six
rule-based detectors and print what a reviewer would see.
"""

from grieferlens.detect import run_all_detectors
from grieferlens.simgen import Injection, Scenario, generate_match
from grieferlens.telemetry import parse_match

scenario = Scenario(
    seed=2023,
    duration_s=1200.0,
    injections=(
        Injection("P03", "jungle_stealing", {"stage": "late"}),
        Injection("P03", "non_participation"),
    ),
)

telemetry, truth = generate_match(scenario)
print(f"generated match {truth.match_id}: {len(telemetry) / 1e6:.2f} MB of telemetry")
print(f"ground truth labels: {truth.labels}\n")

match = parse_match(telemetry)
print(f"{len(match.events)} events, {len(match.position_samples)} position samples\n")

for summary in run_all_detectors(match):
    header = f"{summary.player_id} ({summary.hero_type}, {summary.assigned_position})"
    if not summary.findings:
        print(f"{header}: clean")
        continue
    print(f"{header}: {len(summary.findings)} finding(s)")
    for finding in summary.findings:
        ranges = ", ".join(f"[{a:.0f}, {b:.0f}]" for a, b in finding.time_ranges[:4])
        print(f"  {finding.griefer_type:<20} severity {finding.severity:.2f}  at {ranges}")
    print(f"  -> {summary.suspicion_paragraph}")
