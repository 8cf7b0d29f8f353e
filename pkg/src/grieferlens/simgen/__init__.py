"""Deterministic, seeded synthetic match generation."""

from .generate import (
    GroundTruth,
    Injection,
    Scenario,
    generate_corpus,
    generate_match,
    scenario_for_archetype,
    validate_scenario,
)
from .rng import SplitMix64, stream_for
