"""Decision procedures for control instances.

``brute_force_decide`` is the ground truth: it enumerates every legal chair
action in a fixed canonical order (subsets by size then lexicographically;
partitions by binary mask, ascending) and reports the first action that
meets the goal.  The remaining functions are the polynomial-time deciders
for the specific system/control-type pairs that admit them; each is checked
against the brute force in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations, product
from math import comb
from typing import Callable, Mapping

from .control import (
    AddCandidates, AddVoters, AddVoterSet, AddSet, CandidatePartition,
    ControlAction, ControlInstance, DeleteCandidates, DeleteSet, DeleteVoters,
    DeleteVoterSet, PartitionCandidates, PartitionVoters,
    RunoffPartitionCandidates, VoterPartition, CONSTRUCTIVE, DESTRUCTIVE, TE,
    goal_met, outcome,
)
from .core import restrict, unique_winner
from .errors import BudgetExceeded, NoDeciderRegistered, WrongSystem
from .systems import COUNTED_WINNERS, SystemId, raw_winners, route

DEFAULT_BUDGET = 2 ** 24


@dataclass(frozen=True)
class Decision:
    answer: bool
    witness: ControlAction | None = None


class CachedEvaluator:
    """Memoizing wrapper around a system's winner function."""

    def __init__(self, system: SystemId):
        self.system = system
        self._cache: dict = {}

    def __call__(self, cands: frozenset[int], ballots) -> frozenset[int]:
        key = (cands, ballots)
        hit = self._cache.get(key)
        if hit is None:
            hit = raw_winners(self.system, cands, ballots)
            self._cache[key] = hit
        return hit


def _subsets(pool: list[int], max_size: int):
    """Subsets of a sorted pool, by size then lexicographically, as frozensets."""
    for size in range(max_size + 1):
        for combo in combinations(pool, size):
            yield frozenset(combo)


def _subset_count(n: int, max_size: int) -> int:
    return sum(comb(n, s) for s in range(min(n, max_size) + 1))


def _decide_by_enumeration(instance: ControlInstance, actions, evaluate) -> Decision:
    for action in actions:
        if goal_met(instance, action, evaluate):
            return Decision(True, action)
    return Decision(False, None)


def _partition_voters_anonymous(instance: PartitionVoters, evaluate,
                                budget: int) -> Decision:
    """Voter partitions for ballot-order-insensitive systems.

    Identical ballots are interchangeable: only the per-group counts sent to
    side 1 matter.  Each count vector's cheapest concrete partition (in mask
    order) assigns the lowest ballot indices of each group to side 1, so
    iterating count vectors sorted by that representative reproduces exactly
    the canonical first-success witness of the full mask enumeration.
    """
    groups: dict[tuple, list[int]] = {}
    for i, b in enumerate(instance.ballots):
        groups.setdefault(b, []).append(i)
    ballots_of = list(groups.keys())
    indices_of = list(groups.values())
    sizes = [len(ix) for ix in indices_of]

    total = 1
    for s in sizes:
        total *= s + 1
    if total > budget:
        raise BudgetExceeded(f"{total} voter-partition classes exceed budget {budget}")

    # pre[g][t] = mask of the t lowest ballot indices in group g
    pre = []
    for ix in indices_of:
        row = [0]
        for i in ix:
            row.append(row[-1] | 1 << i)
        pre.append(row)

    def rep_mask(counts) -> int:
        mask = 0
        for row, t in zip(pre, counts):
            mask |= row[t]
        return mask

    classes = sorted(
        (rep_mask(counts), counts)
        for counts in product(*[range(s + 1) for s in sizes]))

    cands = instance.candidates
    tie = instance.tie
    full = instance.ballots
    surv_cache: dict[tuple, frozenset[int]] = {}
    final_cache: dict[frozenset[int], frozenset[int]] = {}

    # both subelections keep the full candidate set, so the routed rule is
    # fixed and a counts-based evaluator (when the rule has one) avoids
    # rebuilding ballot lists per partition class
    factory = COUNTED_WINNERS.get(route(instance.system, cands).tag)
    counted = factory(cands, tuple(ballots_of)) if factory else None

    def survivors(counts) -> frozenset[int]:
        hit = surv_cache.get(counts)
        if hit is None:
            if counted is not None:
                ws = counted(counts)
            else:
                sub = tuple(b for b, t in zip(ballots_of, counts) for _ in range(t))
                ws = evaluate(cands, sub)
            hit = ws if (tie != TE or len(ws) == 1) else frozenset()
            surv_cache[counts] = hit
        return hit

    want = instance.goal == CONSTRUCTIVE
    c = instance.distinguished
    for mask, counts in classes:
        s1 = survivors(counts)
        s2 = survivors(tuple(s - t for s, t in zip(sizes, counts)))
        final = s1 | s2
        ws = final_cache.get(final)
        if ws is None:
            ws = evaluate(final, tuple(restrict(b, final) for b in full))
            final_cache[final] = ws
        if unique_winner(ws, c) == want:
            side1 = frozenset(i for ix, t in zip(indices_of, counts) for i in ix[:t])
            return Decision(True, VoterPartition(side1))
    return Decision(False, None)


def brute_force_decide(instance: ControlInstance,
                       budget: int = DEFAULT_BUDGET) -> Decision:
    """Exhaustively search all legal chair actions for the instance's goal."""
    evaluate = CachedEvaluator(instance.system)

    if isinstance(instance, AddCandidates):
        pool = sorted(instance.spoilers)
        if 2 ** len(pool) > budget:
            raise BudgetExceeded(f"2^{len(pool)} add-sets exceed budget {budget}")
        actions = (AddSet(s) for s in _subsets(pool, len(pool)))
        return _decide_by_enumeration(instance, actions, evaluate)

    if isinstance(instance, DeleteCandidates):
        pool = sorted(instance.candidates)
        if instance.goal == DESTRUCTIVE:
            pool.remove(instance.distinguished)
        k = min(instance.limit, len(pool))
        if _subset_count(len(pool), k) > budget:
            raise BudgetExceeded(f"delete-sets exceed budget {budget}")
        actions = (DeleteSet(s) for s in _subsets(pool, k))
        return _decide_by_enumeration(instance, actions, evaluate)

    if isinstance(instance, (PartitionCandidates, RunoffPartitionCandidates)):
        order = sorted(instance.candidates)
        m = len(order)
        if 2 ** m > budget:
            raise BudgetExceeded(f"2^{m} candidate partitions exceed budget {budget}")
        every = frozenset(order)
        actions = (
            CandidatePartition(
                side1 := frozenset(order[j] for j in range(m) if mask >> j & 1),
                every - side1)
            for mask in range(2 ** m))
        return _decide_by_enumeration(instance, actions, evaluate)

    if isinstance(instance, AddVoters):
        pool = list(range(len(instance.unregistered)))
        if _subset_count(len(pool), instance.limit) > budget:
            raise BudgetExceeded(f"add-voter sets exceed budget {budget}")
        actions = (AddVoterSet(s) for s in _subsets(pool, instance.limit))
        return _decide_by_enumeration(instance, actions, evaluate)

    if isinstance(instance, DeleteVoters):
        pool = list(range(len(instance.ballots)))
        if _subset_count(len(pool), instance.limit) > budget:
            raise BudgetExceeded(f"delete-voter sets exceed budget {budget}")
        actions = (DeleteVoterSet(s) for s in _subsets(pool, instance.limit))
        return _decide_by_enumeration(instance, actions, evaluate)

    if isinstance(instance, PartitionVoters):
        if instance.system.voter_anonymous:
            return _partition_voters_anonymous(instance, evaluate, budget)
        n = len(instance.ballots)
        if 2 ** n > budget:
            raise BudgetExceeded(f"2^{n} voter partitions exceed budget {budget}")
        actions = (
            VoterPartition(frozenset(i for i in range(n) if mask >> i & 1))
            for mask in range(2 ** n))
        return _decide_by_enumeration(instance, actions, evaluate)

    raise WrongSystem(f"no brute-force handler for {type(instance).__name__}")


Decider = Callable[[ControlInstance], Decision]


def route_and_solve_voters(instance: ControlInstance,
                           deciders: Mapping[SystemId, Decider] | None = None,
                           ) -> Decision:
    """Voter control on a hybrid: delegate wholesale to the routed constituent.

    Adding, deleting, or partitioning voters never changes the candidate
    set, so one constituent handles every election evaluation the instance
    can produce; its decider decides the hybrid instance outright.
    """
    if not isinstance(instance, (AddVoters, DeleteVoters, PartitionVoters)):
        raise WrongSystem("route_and_solve_voters handles voter control only")
    if not instance.system.is_hybrid:
        raise WrongSystem("instance system must be a hybrid")
    target = route(instance.system, instance.candidates)
    if deciders is None:
        decider: Decider = brute_force_decide
    else:
        if target not in deciders:
            raise NoDeciderRegistered(f"no decider for {target}")
        decider = deciders[target]
    return decider(replace(instance, system=target))


def ccac_hybrid_poly(instance: AddCandidates,
                     deciders: Mapping[SystemId, Decider] | None = None,
                     ) -> Decision:
    """Control by adding candidates on a hybrid, by case analysis on residues.

    Case 1: mixed-residue qualified set -- every reachable candidate set is
    routed to the default constituent, so its decider decides the instance.
    Case 2: uniform residue q and all spoilers congruent to q -- likewise,
    with constituent q.  Case 3: uniform q with off-residue spoilers --
    first try the residue-q spoilers alone under constituent q, then force
    in each off-residue spoiler d (which flips routing to the default) and
    ask the default's decider with d qualified.
    """
    if not isinstance(instance, AddCandidates):
        raise WrongSystem("ccac_hybrid_poly handles adding candidates only")
    sid = instance.system
    if not sid.is_hybrid:
        raise WrongSystem("instance system must be a hybrid")

    def decide(sub_system: SystemId, sub: AddCandidates) -> Decision:
        sub = replace(sub, system=sub_system)
        if deciders is None:
            return brute_force_decide(sub)
        if sub_system not in deciders:
            raise NoDeciderRegistered(f"no decider for {sub_system}")
        return deciders[sub_system](sub)

    k = len(sid.constituents)
    q_residues = {x % k for x in instance.qualified}
    if len(q_residues) > 1:
        return decide(sid.default_constituent, instance)

    q = q_residues.pop()
    off = sorted(s for s in instance.spoilers if s % k != q)
    if not off:
        return decide(sid.constituents[q], instance)

    s_q = instance.spoilers - frozenset(off)
    kept = instance.qualified | s_q
    step1 = decide(
        sid.constituents[q],
        replace(instance, spoilers=s_q,
                ballots=tuple(restrict(b, kept) for b in instance.ballots)))
    if step1.answer:
        return step1
    for d in off:
        sub = decide(
            sid.default_constituent,
            replace(instance, qualified=instance.qualified | {d},
                    spoilers=instance.spoilers - {d}))
        if sub.answer:
            assert isinstance(sub.witness, AddSet)
            return Decision(True, AddSet(sub.witness.added | {d}))
    return Decision(False, None)


def e1_prefix_ccdc_poly(instance: DeleteCandidates) -> Decision:
    """Constructive deleting-candidates for the first-two-voters prefix rule."""
    if (not isinstance(instance, DeleteCandidates)
            or instance.system.tag != "e1_prefix"
            or instance.goal != CONSTRUCTIVE):
        raise WrongSystem("expects constructive deleting candidates on e1_prefix")
    if len(instance.ballots) < 2:
        return Decision(False, None)
    c = instance.distinguished
    b1, b2 = instance.ballots[0], instance.ballots[1]
    c1 = frozenset(b1[:b1.index(c)])
    c2 = frozenset(b2[:b2.index(c)])
    union = c1 | c2
    k = instance.limit
    if len(union) <= k:
        return Decision(True, DeleteSet(union))
    if len(union) > k + 1:
        return Decision(False, None)
    # ||union|| = k + 1: keep exactly one second-voter blocker d and check
    # whether c still ends up first or second on every ballot
    remaining_base = instance.candidates - union
    for d in sorted(c2):
        kept = remaining_base | {d}
        ws = raw_winners(instance.system, kept,
                         tuple(restrict(b, kept) for b in instance.ballots))
        if unique_winner(ws, c):
            return Decision(True, DeleteSet(union - {d}))
    return Decision(False, None)


def _has_triangular_voter_count(v: int, even_only: bool = False) -> bool:
    n = 0
    while 1 + n * (n - 1) // 2 <= v:
        if 1 + n * (n - 1) // 2 == v and (not even_only or n % 2 == 0):
            return True
        n += 1
    return False


def e1_tri_ccrpc_poly(instance: RunoffPartitionCandidates) -> Decision:
    """Constructive run-off partition for the triangular-voter-count rule.

    If the voter count is not of the form 1 + n(n-1)/2 nobody ever wins;
    otherwise the single partition ({c}, C - {c}) succeeds iff any does.
    """
    if (not isinstance(instance, RunoffPartitionCandidates)
            or instance.system.tag != "e1_tri"
            or instance.goal != CONSTRUCTIVE):
        raise WrongSystem("expects constructive run-off partition on e1_tri")
    if not _has_triangular_voter_count(len(instance.ballots)):
        return Decision(False, None)
    c = instance.distinguished
    action = CandidatePartition(frozenset({c}), instance.candidates - {c})
    if goal_met(instance, action):
        return Decision(True, action)
    return Decision(False, None)


def e1_tri_even_ccpc_poly(instance: PartitionCandidates) -> Decision:
    """Constructive partition for the even-n triangular-voter-count rule.

    Tries (C - {c}, {c}) first; failing that, only partitions fitting the
    structural cases a winner requires -- c on side 1 with ||side1|| in
    {1, n/2 + 2}, or c on side 2 with ||side2|| in {1, n/2 + 1, n/2 + 2} --
    can possibly elect c, so only those are enumerated.
    """
    if (not isinstance(instance, PartitionCandidates)
            or instance.system.tag != "e1_tri_even"
            or instance.goal != CONSTRUCTIVE):
        raise WrongSystem("expects constructive partition on e1_tri_even")
    v = len(instance.ballots)
    roots = [n for n in range(2 * v + 2)
             if 1 + n * (n - 1) // 2 == v and n % 2 == 0]
    if not roots:
        return Decision(False, None)
    c = instance.distinguished
    cands = instance.candidates
    first = CandidatePartition(cands - {c}, frozenset({c}))
    if goal_met(instance, first):
        return Decision(True, first)

    others = sorted(cands - {c})
    seen = {first}
    for n in roots:
        half = n // 2
        cases = [
            (True, (1, half + 2)),          # c in side 1
            (False, (1, half + 2, half + 1)),  # c in side 2
        ]
        for c_in_side1, sizes in cases:
            for size in sizes:
                fixed_size = size - 1 if c_in_side1 else size
                if not 0 <= fixed_size <= len(others):
                    continue
                for combo in combinations(others, fixed_size):
                    chosen = frozenset(combo)
                    side_with_c = chosen | {c}
                    if c_in_side1:
                        action = CandidatePartition(side_with_c, cands - side_with_c)
                    else:
                        action = CandidatePartition(cands - side_with_c, side_with_c)
                    if action in seen:
                        continue
                    seen.add(action)
                    if goal_met(instance, action):
                        return Decision(True, action)
    return Decision(False, None)


def destructive_poly(instance: ControlInstance) -> Decision:
    """Destructive DC/PC/RPC deciders for the two first-ballot-driven rules."""
    tag = instance.system.tag
    if tag not in ("e0_dfirst", "e1_second") or instance.goal != DESTRUCTIVE:
        raise WrongSystem("expects destructive control on e0_dfirst or e1_second")
    c = instance.distinguished
    ballots = instance.ballots
    cands = instance.candidates

    if tag == "e0_dfirst":
        loses_now = not ballots or ballots[0][0] != c
        if isinstance(instance, DeleteCandidates):
            if loses_now:
                return Decision(True, DeleteSet(frozenset()))
            # one voter who ranks c first: c only loses once it is the sole
            # candidate, which costs ||C|| - 1 deletions
            if len(ballots) == 1 and instance.limit >= len(cands) - 1:
                return Decision(True, DeleteSet(cands - {c}))
            return Decision(False, None)
        if isinstance(instance, (PartitionCandidates, RunoffPartitionCandidates)):
            if loses_now:
                return Decision(True, CandidatePartition(frozenset(), cands))
            if len(ballots) == 1:
                return Decision(True, CandidatePartition(frozenset({c}), cands - {c}))
            return Decision(False, None)
        raise WrongSystem(f"no destructive decider for {type(instance).__name__}")

    # e1_second
    if isinstance(instance, DeleteCandidates):
        if not ballots or len(ballots[0]) < 2 or ballots[0][1] != c:
            return Decision(True, DeleteSet(frozenset()))
        if (len(ballots) == 4 * len(cands) ** 2
                and all(c in b[:2] for b in ballots)):
            return Decision(True, DeleteSet(frozenset()))
        if instance.limit > 0:
            # deleting the first voter's favourite moves c up to first place
            return Decision(True, DeleteSet(frozenset({ballots[0][0]})))
        return Decision(False, None)
    if isinstance(instance, (PartitionCandidates, RunoffPartitionCandidates)):
        # alone on a side, c is not ranked second by anyone and is eliminated
        return Decision(True, CandidatePartition(frozenset({c}), cands - {c}))
    raise WrongSystem(f"no destructive decider for {type(instance).__name__}")
