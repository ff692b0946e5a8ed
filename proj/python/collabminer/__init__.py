"""Collaboration Petri net discovery from multi-concept event logs."""

from ._collabminer import (
    CollabMinerError,
    CompositionError,
    DiscoveryError,
    EventLog,
    Model,
    ParseError,
    SchemaError,
    conformance,
    discover,
    final_marking_reachable,
    playout,
    replay_fitness,
    scenario,
    scenario_names,
)

__all__ = [
    "CollabMinerError",
    "CompositionError",
    "DiscoveryError",
    "EventLog",
    "Model",
    "ParseError",
    "SchemaError",
    "conformance",
    "discover",
    "final_marking_reachable",
    "playout",
    "replay_fitness",
    "scenario",
    "scenario_names",
]
