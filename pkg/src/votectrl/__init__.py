"""Hybrid election systems, electoral control problems, and their solvers."""

from .core import Ballot, Election, NameCodec, restrict, unique_winner
from .systems import SystemId, atomic, hybrid, hybrid_base, parse_system, winners
from .control import (
    AddCandidates, AddSet, AddVoters, AddVoterSet, CandidatePartition,
    ControlAction, ControlInstance, DeleteCandidates, DeleteSet, DeleteVoters,
    DeleteVoterSet, PartitionCandidates, PartitionVoters,
    RunoffPartitionCandidates, VoterPartition,
    CONSTRUCTIVE, DESTRUCTIVE, TE, TP, goal_met, outcome,
)
from .solvers import Decision, brute_force_decide

__all__ = [
    "Ballot", "Election", "NameCodec", "restrict", "unique_winner",
    "SystemId", "atomic", "hybrid", "hybrid_base", "parse_system", "winners",
    "AddCandidates", "AddSet", "AddVoters", "AddVoterSet", "CandidatePartition",
    "ControlAction", "ControlInstance", "DeleteCandidates", "DeleteSet",
    "DeleteVoters", "DeleteVoterSet", "PartitionCandidates", "PartitionVoters",
    "RunoffPartitionCandidates", "VoterPartition",
    "CONSTRUCTIVE", "DESTRUCTIVE", "TE", "TP", "goal_met", "outcome",
    "Decision", "brute_force_decide",
]
