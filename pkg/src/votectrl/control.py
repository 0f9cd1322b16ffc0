"""Control instances, chair actions, and outcome evaluation.

A control instance pairs an election system with an election, a
distinguished candidate, and one of seven structural attack shapes; with
constructive/destructive goals this yields the twenty control types
(partition types additionally carry a TE/TP tie model).  ``outcome``
applies one concrete chair action and returns the final winner set;
``goal_met`` tests the chair's goal on it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence, Union

from .core import Ballot, format_ballot, parse_ballot_line, restrict, unique_winner
from .errors import BoundViolation, ParseError, ShapeMismatch
from .systems import SystemId, format_system, parse_system, raw_winners

CONSTRUCTIVE = "constructive"
DESTRUCTIVE = "destructive"
TE = "TE"
TP = "TP"

Evaluator = Callable[[frozenset[int], tuple[Ballot, ...]], frozenset[int]]


def _check_ballots(ballots: Sequence[Sequence[int]], universe: frozenset[int]) -> tuple[Ballot, ...]:
    out = tuple(tuple(b) for b in ballots)
    for b in out:
        if len(b) != len(universe) or frozenset(b) != universe:
            raise ValueError(f"ballot {b} is not a permutation of {sorted(universe)}")
    return out


def _check_goal(goal: str) -> None:
    if goal not in (CONSTRUCTIVE, DESTRUCTIVE):
        raise ValueError(f"bad goal {goal!r}")


def _check_tie(tie: str) -> None:
    if tie not in (TE, TP):
        raise ValueError(f"bad tie model {tie!r}")


@dataclass(frozen=True)
class AddCandidates:
    system: SystemId
    qualified: frozenset[int]
    spoilers: frozenset[int]
    distinguished: int
    ballots: tuple[Ballot, ...]  # over qualified ∪ spoilers
    goal: str

    def __post_init__(self):
        object.__setattr__(self, "qualified", frozenset(self.qualified))
        object.__setattr__(self, "spoilers", frozenset(self.spoilers))
        _check_goal(self.goal)
        if self.qualified & self.spoilers:
            raise ValueError("qualified and spoiler sets must be disjoint")
        if self.distinguished not in self.qualified:
            raise ValueError("distinguished candidate must be qualified")
        object.__setattr__(
            self, "ballots",
            _check_ballots(self.ballots, self.qualified | self.spoilers))

    @property
    def type_code(self) -> str:
        return ("CCAC" if self.goal == CONSTRUCTIVE else "DCAC")


@dataclass(frozen=True)
class DeleteCandidates:
    system: SystemId
    candidates: frozenset[int]
    distinguished: int
    ballots: tuple[Ballot, ...]
    limit: int
    goal: str

    def __post_init__(self):
        object.__setattr__(self, "candidates", frozenset(self.candidates))
        _check_goal(self.goal)
        if self.distinguished not in self.candidates:
            raise ValueError("distinguished candidate must be a candidate")
        if self.limit < 0:
            raise ValueError("limit must be >= 0")
        object.__setattr__(self, "ballots", _check_ballots(self.ballots, self.candidates))

    @property
    def type_code(self) -> str:
        return ("CCDC" if self.goal == CONSTRUCTIVE else "DCDC")


@dataclass(frozen=True)
class PartitionCandidates:
    system: SystemId
    candidates: frozenset[int]
    distinguished: int
    ballots: tuple[Ballot, ...]
    tie: str
    goal: str

    def __post_init__(self):
        object.__setattr__(self, "candidates", frozenset(self.candidates))
        _check_goal(self.goal)
        _check_tie(self.tie)
        if self.distinguished not in self.candidates:
            raise ValueError("distinguished candidate must be a candidate")
        object.__setattr__(self, "ballots", _check_ballots(self.ballots, self.candidates))

    @property
    def type_code(self) -> str:
        return ("CCPC" if self.goal == CONSTRUCTIVE else "DCPC")


@dataclass(frozen=True)
class RunoffPartitionCandidates:
    system: SystemId
    candidates: frozenset[int]
    distinguished: int
    ballots: tuple[Ballot, ...]
    tie: str
    goal: str

    def __post_init__(self):
        object.__setattr__(self, "candidates", frozenset(self.candidates))
        _check_goal(self.goal)
        _check_tie(self.tie)
        if self.distinguished not in self.candidates:
            raise ValueError("distinguished candidate must be a candidate")
        object.__setattr__(self, "ballots", _check_ballots(self.ballots, self.candidates))

    @property
    def type_code(self) -> str:
        return ("CCRPC" if self.goal == CONSTRUCTIVE else "DCRPC")


@dataclass(frozen=True)
class AddVoters:
    system: SystemId
    candidates: frozenset[int]
    distinguished: int
    registered: tuple[Ballot, ...]
    unregistered: tuple[Ballot, ...]
    limit: int
    goal: str

    def __post_init__(self):
        object.__setattr__(self, "candidates", frozenset(self.candidates))
        _check_goal(self.goal)
        if self.distinguished not in self.candidates:
            raise ValueError("distinguished candidate must be a candidate")
        if not 0 <= self.limit <= len(self.unregistered):
            raise ValueError("limit must be between 0 and the unregistered pool size")
        object.__setattr__(self, "registered", _check_ballots(self.registered, self.candidates))
        object.__setattr__(self, "unregistered", _check_ballots(self.unregistered, self.candidates))

    @property
    def ballots(self) -> tuple[Ballot, ...]:
        return self.registered

    @property
    def type_code(self) -> str:
        return ("CCAV" if self.goal == CONSTRUCTIVE else "DCAV")


@dataclass(frozen=True)
class DeleteVoters:
    system: SystemId
    candidates: frozenset[int]
    distinguished: int
    ballots: tuple[Ballot, ...]
    limit: int
    goal: str

    def __post_init__(self):
        object.__setattr__(self, "candidates", frozenset(self.candidates))
        _check_goal(self.goal)
        if self.distinguished not in self.candidates:
            raise ValueError("distinguished candidate must be a candidate")
        if not 0 <= self.limit <= len(self.ballots):
            raise ValueError("limit must be between 0 and the ballot count")
        object.__setattr__(self, "ballots", _check_ballots(self.ballots, self.candidates))

    @property
    def type_code(self) -> str:
        return ("CCDV" if self.goal == CONSTRUCTIVE else "DCDV")


@dataclass(frozen=True)
class PartitionVoters:
    system: SystemId
    candidates: frozenset[int]
    distinguished: int
    ballots: tuple[Ballot, ...]
    tie: str
    goal: str

    def __post_init__(self):
        object.__setattr__(self, "candidates", frozenset(self.candidates))
        _check_goal(self.goal)
        _check_tie(self.tie)
        if self.distinguished not in self.candidates:
            raise ValueError("distinguished candidate must be a candidate")
        object.__setattr__(self, "ballots", _check_ballots(self.ballots, self.candidates))

    @property
    def type_code(self) -> str:
        return ("CCPV" if self.goal == CONSTRUCTIVE else "DCPV")


ControlInstance = Union[
    AddCandidates, DeleteCandidates, PartitionCandidates, RunoffPartitionCandidates,
    AddVoters, DeleteVoters, PartitionVoters,
]


# --- chair actions ---------------------------------------------------------


@dataclass(frozen=True)
class AddSet:
    added: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "added", frozenset(self.added))


@dataclass(frozen=True)
class DeleteSet:
    deleted: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "deleted", frozenset(self.deleted))


@dataclass(frozen=True)
class CandidatePartition:
    """Ordered pair (side1, side2); side1 faces elimination first in PC."""

    side1: frozenset[int]
    side2: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "side1", frozenset(self.side1))
        object.__setattr__(self, "side2", frozenset(self.side2))
        if self.side1 & self.side2:
            raise ValueError("partition sides must be disjoint")


@dataclass(frozen=True)
class VoterPartition:
    """Ballot indices assigned to side 1; the rest go to side 2."""

    side1: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "side1", frozenset(self.side1))


@dataclass(frozen=True)
class AddVoterSet:
    added: frozenset[int]  # indices into the unregistered pool

    def __post_init__(self):
        object.__setattr__(self, "added", frozenset(self.added))


@dataclass(frozen=True)
class DeleteVoterSet:
    deleted: frozenset[int]  # indices into the ballot list

    def __post_init__(self):
        object.__setattr__(self, "deleted", frozenset(self.deleted))


ControlAction = Union[
    AddSet, DeleteSet, CandidatePartition, VoterPartition, AddVoterSet, DeleteVoterSet,
]


# --- outcome evaluation ----------------------------------------------------


def _survivors(evaluate: Evaluator, tie: str, cands: frozenset[int],
               ballots: tuple[Ballot, ...]) -> frozenset[int]:
    ws = evaluate(cands, ballots)
    if tie == TE:
        return ws if len(ws) == 1 else frozenset()
    return ws


def _restricted(ballots: Sequence[Ballot], keep: frozenset[int]) -> tuple[Ballot, ...]:
    return tuple(restrict(b, keep) for b in ballots)


def outcome(instance: ControlInstance, action: ControlAction,
            evaluate: Evaluator | None = None) -> frozenset[int]:
    """Winner set after the chair applies ``action`` to ``instance``.

    ``evaluate`` may override the winner function (e.g. with a memoizing
    wrapper); it must agree with the instance's system.
    """
    if evaluate is None:
        sid = instance.system
        evaluate = lambda cands, ballots: raw_winners(sid, cands, ballots)

    if isinstance(instance, AddCandidates):
        if not isinstance(action, AddSet):
            raise ShapeMismatch(f"{type(action).__name__} does not fit AddCandidates")
        if not action.added <= instance.spoilers:
            raise BoundViolation("can only add spoiler candidates")
        final = instance.qualified | action.added
        return evaluate(final, _restricted(instance.ballots, final))

    if isinstance(instance, DeleteCandidates):
        if not isinstance(action, DeleteSet):
            raise ShapeMismatch(f"{type(action).__name__} does not fit DeleteCandidates")
        if not action.deleted <= instance.candidates:
            raise BoundViolation("can only delete existing candidates")
        if len(action.deleted) > instance.limit:
            raise BoundViolation(f"deleted {len(action.deleted)} > limit {instance.limit}")
        if instance.goal == DESTRUCTIVE and instance.distinguished in action.deleted:
            raise BoundViolation("destructive control may not delete the distinguished candidate")
        final = instance.candidates - action.deleted
        return evaluate(final, _restricted(instance.ballots, final))

    if isinstance(instance, (PartitionCandidates, RunoffPartitionCandidates)):
        if not isinstance(action, CandidatePartition):
            raise ShapeMismatch(f"{type(action).__name__} does not fit a candidate partition")
        if action.side1 | action.side2 != instance.candidates:
            raise BoundViolation("partition sides must cover the candidate set")
        s1 = _survivors(evaluate, instance.tie, action.side1,
                        _restricted(instance.ballots, action.side1))
        if isinstance(instance, RunoffPartitionCandidates):
            s2 = _survivors(evaluate, instance.tie, action.side2,
                            _restricted(instance.ballots, action.side2))
            final = s1 | s2
        else:
            final = s1 | action.side2
        return evaluate(final, _restricted(instance.ballots, final))

    if isinstance(instance, AddVoters):
        if not isinstance(action, AddVoterSet):
            raise ShapeMismatch(f"{type(action).__name__} does not fit AddVoters")
        if not all(0 <= i < len(instance.unregistered) for i in action.added):
            raise BoundViolation("added voter index out of range")
        if len(action.added) > instance.limit:
            raise BoundViolation(f"added {len(action.added)} > limit {instance.limit}")
        ballots = instance.registered + tuple(
            instance.unregistered[i] for i in sorted(action.added))
        return evaluate(instance.candidates, ballots)

    if isinstance(instance, DeleteVoters):
        if not isinstance(action, DeleteVoterSet):
            raise ShapeMismatch(f"{type(action).__name__} does not fit DeleteVoters")
        if not all(0 <= i < len(instance.ballots) for i in action.deleted):
            raise BoundViolation("deleted voter index out of range")
        if len(action.deleted) > instance.limit:
            raise BoundViolation(f"deleted {len(action.deleted)} > limit {instance.limit}")
        ballots = tuple(b for i, b in enumerate(instance.ballots)
                        if i not in action.deleted)
        return evaluate(instance.candidates, ballots)

    if isinstance(instance, PartitionVoters):
        if not isinstance(action, VoterPartition):
            raise ShapeMismatch(f"{type(action).__name__} does not fit PartitionVoters")
        if not all(0 <= i < len(instance.ballots) for i in action.side1):
            raise BoundViolation("partition voter index out of range")
        v1 = tuple(b for i, b in enumerate(instance.ballots) if i in action.side1)
        v2 = tuple(b for i, b in enumerate(instance.ballots) if i not in action.side1)
        s1 = _survivors(evaluate, instance.tie, instance.candidates, v1)
        s2 = _survivors(evaluate, instance.tie, instance.candidates, v2)
        final = s1 | s2
        return evaluate(final, _restricted(instance.ballots, final))

    raise ShapeMismatch(f"unknown instance type {type(instance).__name__}")


def goal_met(instance: ControlInstance, action: ControlAction,
             evaluate: Evaluator | None = None) -> bool:
    """Does ``action`` achieve the chair's goal for the distinguished candidate?"""
    won = unique_winner(outcome(instance, action, evaluate), instance.distinguished)
    return won if instance.goal == CONSTRUCTIVE else not won


def with_goal(instance: ControlInstance, goal: str) -> ControlInstance:
    return replace(instance, goal=goal)


# --- text format -----------------------------------------------------------

_TYPE_CODES = {
    "AC": (AddCandidates,), "DC": (DeleteCandidates,), "PC": (PartitionCandidates,),
    "RPC": (RunoffPartitionCandidates,), "AV": (AddVoters,), "DV": (DeleteVoters,),
    "PV": (PartitionVoters,),
}

ALL_TYPE_CODES = tuple(
    f"{g}{s}" for g in ("CC", "DC") for s in ("AC", "DC", "PC", "RPC", "AV", "DV", "PV"))


def parse_instance(text: str) -> ControlInstance:
    """Parse the line-based control-instance format."""
    fields: dict[str, str] = {}
    ballots: list[Ballot] = []
    unregistered: list[Ballot] = []
    candidates: list[int] = []
    spoilers: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, body = line.partition(" ")
        body = body.strip()
        if key == "ballot":
            ballots.append(parse_ballot_line(body, lineno))
        elif key == "unregistered-ballot":
            unregistered.append(parse_ballot_line(body, lineno))
        elif key == "candidates":
            try:
                candidates = [int(t) for t in body.split()]
            except ValueError as exc:
                raise ParseError(f"line {lineno}: bad candidate ids") from exc
        elif key == "spoilers":
            try:
                spoilers = [int(t) for t in body.split()]
            except ValueError as exc:
                raise ParseError(f"line {lineno}: bad spoiler ids") from exc
        elif key in ("type", "system", "distinguished", "k", "tie"):
            fields[key] = body
        else:
            raise ParseError(f"line {lineno}: unknown directive {key!r}")

    for required in ("type", "system", "distinguished"):
        if required not in fields:
            raise ParseError(f"missing '{required}' line")
    code = fields["type"].upper()
    if code not in ALL_TYPE_CODES:
        raise ParseError(f"unknown control type {code!r}")
    goal = CONSTRUCTIVE if code.startswith("CC") else DESTRUCTIVE
    shape = code[2:]
    system = parse_system(fields["system"])
    try:
        distinguished = int(fields["distinguished"])
    except ValueError as exc:
        raise ParseError("bad distinguished candidate id") from exc
    tie = fields.get("tie", TE).upper()
    if "k" in fields:
        try:
            limit = int(fields["k"])
        except ValueError as exc:
            raise ParseError("bad limit k") from exc
    else:
        limit = None

    try:
        if shape == "AC":
            return AddCandidates(system, frozenset(candidates), frozenset(spoilers),
                                 distinguished, tuple(ballots), goal)
        if shape == "DC":
            if limit is None:
                raise ParseError("DC instances need a 'k' line")
            return DeleteCandidates(system, frozenset(candidates), distinguished,
                                    tuple(ballots), limit, goal)
        if shape == "PC":
            return PartitionCandidates(system, frozenset(candidates), distinguished,
                                       tuple(ballots), tie, goal)
        if shape == "RPC":
            return RunoffPartitionCandidates(system, frozenset(candidates), distinguished,
                                             tuple(ballots), tie, goal)
        if shape == "AV":
            if limit is None:
                raise ParseError("AV instances need a 'k' line")
            return AddVoters(system, frozenset(candidates), distinguished,
                             tuple(ballots), tuple(unregistered), limit, goal)
        if shape == "DV":
            if limit is None:
                raise ParseError("DV instances need a 'k' line")
            return DeleteVoters(system, frozenset(candidates), distinguished,
                                tuple(ballots), limit, goal)
        if shape == "PV":
            return PartitionVoters(system, frozenset(candidates), distinguished,
                                   tuple(ballots), tie, goal)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown control type {code!r}")


def format_instance(instance: ControlInstance) -> str:
    lines = [f"type {instance.type_code}",
             f"system {format_system(instance.system)}",
             f"distinguished {instance.distinguished}"]
    if isinstance(instance, (DeleteCandidates, AddVoters, DeleteVoters)):
        lines.append(f"k {instance.limit}")
    if isinstance(instance, (PartitionCandidates, RunoffPartitionCandidates, PartitionVoters)):
        lines.append(f"tie {instance.tie}")
    if isinstance(instance, AddCandidates):
        lines.append("candidates " + " ".join(map(str, sorted(instance.qualified))))
        lines.append("spoilers " + " ".join(map(str, sorted(instance.spoilers))))
    else:
        lines.append("candidates " + " ".join(map(str, sorted(instance.candidates))))
    for b in instance.ballots:
        lines.append("ballot " + format_ballot(b))
    if isinstance(instance, AddVoters):
        for b in instance.unregistered:
            lines.append("unregistered-ballot " + format_ballot(b))
    return "\n".join(lines) + "\n"
