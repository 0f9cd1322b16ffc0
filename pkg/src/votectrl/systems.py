"""Election systems: the concrete rules and the hybrid combinator.

Every system is a pure function from (candidate set, ballot list) to a
winner set.  ``winners`` is the public entry point; the per-tag functions
take the raw ``(candidates, ballots)`` pair so solvers can call them in
tight loops without building Election objects.

Several rules are deliberately artificial: they exist to exhibit specific
control behaviour (e.g. sensitivity to the first ballot, or to exact voter
counts), not to be sensible voting rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterable

from .core import Ballot, Election
from .errors import ParseError

ATOMIC_TAGS = (
    "plurality",
    "condorcet",
    "not_all_one",
    "e_first",
    "e_last",
    "e_null",
    "e0_solo",
    "e1_prefix",
    "e0_single",
    "e1_tri",
    "e1_tri_even",
    "e0_dfirst",
    "e1_second",
)

# Systems whose outcome is invariant under permuting the ballot list.  Used
# by the brute-force solver to collapse symmetric voter partitions.
VOTER_ANONYMOUS_TAGS = frozenset(
    {"plurality", "condorcet", "not_all_one", "e_first", "e_last", "e_null",
     "e0_solo", "e0_single"}
)

# Systems guaranteed to return winner sets of size <= 1.
TIE_FREE_TAGS = frozenset(
    {"not_all_one", "e0_solo", "e1_prefix", "e0_single", "e1_tri",
     "e1_tri_even", "e0_dfirst", "e1_second", "e_first", "e_last", "e_null"}
)


@dataclass(frozen=True)
class SystemId:
    """A system name: an atomic tag, or hybrid/hybrid_base over atomic ones."""

    tag: str
    constituents: tuple["SystemId", ...] = ()
    default: "SystemId | None" = None

    def __post_init__(self):
        if self.tag in ATOMIC_TAGS:
            if self.constituents or self.default is not None:
                raise ValueError(f"{self.tag} takes no constituents")
        elif self.tag in ("hybrid", "hybrid_base"):
            if not self.constituents:
                raise ValueError("hybrid needs at least one constituent")
            for c in self.constituents:
                if c.is_hybrid:
                    raise ValueError("hybrid constituents must not be hybrids")
            if self.tag == "hybrid_base":
                if self.default is None or self.default.is_hybrid:
                    raise ValueError("hybrid_base needs a non-hybrid default")
            elif self.default is not None:
                raise ValueError("hybrid's default is implicit (last constituent)")
        else:
            raise ValueError(f"unknown system tag {self.tag!r}")

    @property
    def is_hybrid(self) -> bool:
        return self.tag in ("hybrid", "hybrid_base")

    @property
    def default_constituent(self) -> "SystemId":
        if self.tag == "hybrid":
            return self.constituents[-1]
        if self.tag == "hybrid_base":
            assert self.default is not None
            return self.default
        raise ValueError(f"{self.tag} has no default constituent")

    @property
    def voter_anonymous(self) -> bool:
        if self.is_hybrid:
            return (all(c.voter_anonymous for c in self.constituents)
                    and self.default_constituent.voter_anonymous)
        return self.tag in VOTER_ANONYMOUS_TAGS

    def __str__(self) -> str:
        return format_system(self)


def atomic(tag: str) -> SystemId:
    return SystemId(tag)


def hybrid(*tags_or_ids: "str | SystemId") -> SystemId:
    parts = tuple(atomic(t) if isinstance(t, str) else t for t in tags_or_ids)
    return SystemId("hybrid", parts)


def hybrid_base(constituents: Iterable["str | SystemId"],
                default: "str | SystemId") -> SystemId:
    parts = tuple(atomic(t) if isinstance(t, str) else t for t in constituents)
    dflt = atomic(default) if isinstance(default, str) else default
    return SystemId("hybrid_base", parts, dflt)


def parse_system(text: str) -> SystemId:
    """Parse the SystemId grammar, e.g. ``hybrid:e_first,e_last``."""
    text = text.strip()
    try:
        if text.startswith("hybrid_base:"):
            body = text[len("hybrid_base:"):]
            if ";default=" not in body:
                raise ValueError("hybrid_base needs ';default=<system>'")
            csv, dflt = body.split(";default=", 1)
            return hybrid_base([t.strip() for t in csv.split(",")], dflt.strip())
        if text.startswith("hybrid:"):
            csv = text[len("hybrid:"):]
            return hybrid(*[t.strip() for t in csv.split(",")])
        return atomic(text)
    except ValueError as exc:
        raise ParseError(f"bad system id {text!r}: {exc}") from exc


def format_system(sid: SystemId) -> str:
    if sid.tag == "hybrid":
        return "hybrid:" + ",".join(c.tag for c in sid.constituents)
    if sid.tag == "hybrid_base":
        csv = ",".join(c.tag for c in sid.constituents)
        return f"hybrid_base:{csv};default={sid.default_constituent.tag}"
    return sid.tag


# ---------------------------------------------------------------------------
# winner rules


def plurality_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    if not cands:
        return frozenset()
    counts = dict.fromkeys(cands, 0)
    for b in ballots:
        counts[b[0]] += 1
    best = max(counts.values())
    return frozenset(c for c, n in counts.items() if n == best)


def condorcet_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    half = len(ballots) / 2
    for c in cands:
        # c must beat every other candidate with a strict majority head-to-head
        if all(sum(b.index(c) < b.index(d) for b in ballots) > half
               for d in cands if d != c):
            return frozenset({c})
    return frozenset()


def not_all_one_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    n = len(ballots)
    if n == 0:
        return frozenset()
    top = dict.fromkeys(cands, 0)
    for b in ballots:
        top[b[0]] += 1
    c = next((x for x, k in top.items() if 2 * k > n), None)
    if c is None:
        return frozenset()
    others = [d for d in cands if d != c]
    if others:
        score = dict.fromkeys(others, 0)
        for b in ballots:
            for d in b[:4]:
                if d != c:
                    score[d] += 1
        # the blocking clause quantifies over the *other* candidates; with
        # none present it cannot trigger, so a lone majority candidate wins
        if all(v == 1 for v in score.values()):
            return frozenset()
    return frozenset({c})


def e_first_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    if len(ballots) == 1 and ballots[0]:
        return frozenset({ballots[0][0]})
    return frozenset()


def e_last_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    if len(ballots) == 1 and ballots[0]:
        return frozenset({ballots[0][-1]})
    return frozenset()


def e_null_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    return frozenset()


def e0_solo_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    # the only candidate wins, regardless of the voters
    return frozenset(cands) if len(cands) == 1 else frozenset()


def e1_prefix_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    if len(ballots) < 2 or not ballots[0]:
        return frozenset()
    c = ballots[0][0]
    if ballots[1][0] == c or all(c in b[:2] for b in ballots):
        return frozenset({c})
    return frozenset()


def e0_single_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    if len(cands) == 1 and len(ballots) == 1:
        return frozenset(cands)
    return frozenset()


def _triangular_roots(v: int) -> tuple[int, ...]:
    """All integers n >= 0 with 1 + n(n-1)/2 = v (zero, one, or two of them)."""
    if v < 1:
        return ()
    disc = 8 * (v - 1) + 1
    s = isqrt(disc)
    if s * s != disc:
        return ()
    roots = []
    for num in (1 - s, 1 + s):
        if num >= 0 and num % 2 == 0:
            roots.append(num // 2)
    return tuple(dict.fromkeys(roots))


def e1_tri_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    m = len(cands)
    # ||C|| <= (n+3)/2 over the rationals, i.e. 2||C|| <= n+3
    if not any(2 * m <= n + 3 for n in _triangular_roots(len(ballots))):
        return frozenset()
    if not ballots or not ballots[0]:
        return frozenset()
    c = ballots[0][0]
    if all(c in b[:2] for b in ballots):
        return frozenset({c})
    return frozenset()


def e1_tri_even_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    m = len(cands)
    if not any(n % 2 == 0 and m in (1, n // 2 + 2)
               for n in _triangular_roots(len(ballots))):
        return frozenset()
    if not ballots or not ballots[0]:
        return frozenset()
    c = ballots[0][0]
    if all(c in b[:2] for b in ballots):
        return frozenset({c})
    return frozenset()


def e0_dfirst_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    if not ballots or not ballots[0]:
        return frozenset()
    c = ballots[0][0]
    if len(ballots) >= 2 or len(cands) >= 2:
        return frozenset({c})
    return frozenset()


def e1_second_winners(cands: frozenset[int], ballots: tuple[Ballot, ...]) -> frozenset[int]:
    if not ballots or len(ballots[0]) < 2:
        return frozenset()
    c = ballots[0][1]
    if len(ballots) != 4 * len(cands) ** 2 or any(c not in b[:2] for b in ballots):
        return frozenset({c})
    return frozenset()


def not_all_one_counted(cands: frozenset[int], groups: tuple[Ballot, ...]):
    """Counts-based form of not_all_one for multisets of known ballots.

    ``groups`` lists the distinct ballots; the returned function evaluates
    the rule on the multiset holding ``counts[i]`` copies of ``groups[i]``,
    without materializing the ballot list.
    """
    order = sorted(cands)
    pos = {c: i for i, c in enumerate(order)}
    m = len(order)
    tops = [pos[b[0]] for b in groups]
    top4s = [tuple(pos[c] for c in b[:4]) for b in groups]

    def evaluate(counts: tuple[int, ...]) -> frozenset[int]:
        total = sum(counts)
        if total == 0:
            return frozenset()
        tally = [0] * m
        cpos = -1
        for t, cnt in zip(tops, counts):
            k = tally[t] = tally[t] + cnt
            if 2 * k > total:
                cpos = t
                break
        if cpos < 0:
            return frozenset()
        if m > 1:
            score = [0] * m
            for t4, cnt in zip(top4s, counts):
                if cnt:
                    for d in t4:
                        score[d] += cnt
            if all(v == 1 for i, v in enumerate(score) if i != cpos):
                return frozenset()
        return frozenset({order[cpos]})

    return evaluate


# Factories producing counts-based evaluators for voter-anonymous rules;
# purely an optimization, must agree with the plain winner functions.
COUNTED_WINNERS = {
    "not_all_one": not_all_one_counted,
}


_ATOMIC_WINNERS = {
    "plurality": plurality_winners,
    "condorcet": condorcet_winners,
    "not_all_one": not_all_one_winners,
    "e_first": e_first_winners,
    "e_last": e_last_winners,
    "e_null": e_null_winners,
    "e0_solo": e0_solo_winners,
    "e1_prefix": e1_prefix_winners,
    "e0_single": e0_single_winners,
    "e1_tri": e1_tri_winners,
    "e1_tri_even": e1_tri_even_winners,
    "e0_dfirst": e0_dfirst_winners,
    "e1_second": e1_second_winners,
}


def route(sid: SystemId, cands: frozenset[int]) -> SystemId:
    """The constituent a hybrid dispatches ``cands`` to (identity if atomic).

    With at least one candidate and all candidate names sharing a residue i
    modulo the number of constituents k, the i-th constituent handles the
    election; otherwise (including the empty candidate set) the default does.
    """
    if not sid.is_hybrid:
        return sid
    k = len(sid.constituents)
    if cands:
        residues = {c % k for c in cands}
        if len(residues) == 1:
            return sid.constituents[residues.pop()]
    return sid.default_constituent


def raw_winners(sid: SystemId, cands: frozenset[int],
                ballots: tuple[Ballot, ...]) -> frozenset[int]:
    """Winner set on a raw (candidates, ballots) pair. Hot-loop entry point."""
    if not cands:
        return frozenset()
    target = route(sid, cands)
    return _ATOMIC_WINNERS[target.tag](cands, ballots)


def winners(sid: SystemId, e: Election) -> frozenset[int]:
    """Winner set of ``e`` under system ``sid``."""
    return raw_winners(sid, e.candidates, e.ballots)
