"""Command-line front end.

Exit codes: 0 computation done (YES and NO both count), 1 a verification
suite reported FAIL, 2 usage or parse error, 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import harness, reductions, solvers
from .control import (
    AddCandidates, AddSet, AddVoters, CandidatePartition, DeleteCandidates,
    DeleteSet, DeleteVoters, DeleteVoterSet, AddVoterSet, PartitionCandidates,
    PartitionVoters, RunoffPartitionCandidates, VoterPartition,
    CONSTRUCTIVE, DESTRUCTIVE, TE, TP, parse_instance, format_instance,
)
from .core import parse_election
from .errors import (
    BudgetExceeded, InvalidName, ParseError, ReplayMismatch, VotectrlError,
    WrongSystem,
)
from .systems import ATOMIC_TAGS, atomic, parse_system, winners

DEFAULT_SEED = 2024


def _render_ids(ids) -> str:
    return "{" + ",".join(str(i) for i in sorted(ids)) + "}"


def render_action(action) -> str:
    if isinstance(action, AddSet):
        return f"add {_render_ids(action.added)}"
    if isinstance(action, DeleteSet):
        return f"delete {_render_ids(action.deleted)}"
    if isinstance(action, CandidatePartition):
        return f"partition {_render_ids(action.side1)} | {_render_ids(action.side2)}"
    if isinstance(action, VoterPartition):
        return f"voter-partition side1 {_render_ids(action.side1)}"
    if isinstance(action, AddVoterSet):
        return f"add-voters {_render_ids(action.added)}"
    if isinstance(action, DeleteVoterSet):
        return f"delete-voters {_render_ids(action.deleted)}"
    return repr(action)


def poly_decide(instance) -> solvers.Decision:
    """Dispatch to the polynomial decider covering this instance, if any."""
    sid = instance.system
    if isinstance(instance, AddCandidates) and sid.is_hybrid:
        return solvers.ccac_hybrid_poly(instance)
    if isinstance(instance, (AddVoters, DeleteVoters, PartitionVoters)) and sid.is_hybrid:
        return solvers.route_and_solve_voters(instance)
    if (isinstance(instance, DeleteCandidates) and sid.tag == "e1_prefix"
            and instance.goal == CONSTRUCTIVE):
        return solvers.e1_prefix_ccdc_poly(instance)
    if (isinstance(instance, RunoffPartitionCandidates) and sid.tag == "e1_tri"
            and instance.goal == CONSTRUCTIVE):
        return solvers.e1_tri_ccrpc_poly(instance)
    if (isinstance(instance, PartitionCandidates) and sid.tag == "e1_tri_even"
            and instance.goal == CONSTRUCTIVE):
        return solvers.e1_tri_even_ccpc_poly(instance)
    if (sid.tag in ("e0_dfirst", "e1_second") and instance.goal == DESTRUCTIVE
            and isinstance(instance, (DeleteCandidates, PartitionCandidates,
                                      RunoffPartitionCandidates))):
        return solvers.destructive_poly(instance)
    raise WrongSystem("no polynomial decider covers this instance; use --solver brute")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def cmd_winners(args) -> int:
    election = parse_election(_read(args.election))
    ws = winners(parse_system(args.system), election)
    print("winners:" + "".join(f" {c}" for c in sorted(ws)))
    return 0


def cmd_decide(args) -> int:
    instance = parse_instance(_read(args.instance))
    if args.solver == "brute":
        decision = solvers.brute_force_decide(instance, budget=args.budget)
    else:
        decision = poly_decide(instance)
    if decision.answer:
        print(f"YES witness {render_action(decision.witness)}")
    else:
        print("NO")
    return 0


_X3C_TO = {"DCDV": "DCDV", "DCAV": "DCAV", "DCPV": "DCPV", "DCPV-TE": "DCPV"}
_EHVC_TO = ("CCPC", "DCDC", "DCPC", "DCRPC")


def _build_reduction(args):
    text = _read(args.input)
    frm, to = args.source, args.to.upper()
    if frm == "x3c":
        if to not in _X3C_TO:
            raise ParseError(f"x3c reduces to one of {sorted(set(_X3C_TO))}")
        src = reductions.parse_x3c(text)
        return src, reductions.reduce_x3c(src, _X3C_TO[to])
    src = reductions.parse_graph(text)
    if frm == "vc":
        if to != "CCDC":
            raise ParseError("vc reduces to CCDC")
        if args.k is None:
            raise ParseError("vc reduction needs --k")
        return src, reductions.reduce_vc_to_ccdc(src, args.k)
    if frm == "ohvc":
        if to != "CCRPC":
            raise ParseError("ohvc reduces to CCRPC")
        return src, reductions.reduce_half_vc(src, "CCRPC")
    if to not in _EHVC_TO:
        raise ParseError(f"ehvc reduces to one of {_EHVC_TO}")
    return src, reductions.reduce_half_vc(src, to)


def cmd_reduce(args) -> int:
    _, instance = _build_reduction(args)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(format_instance(instance))
    print(f"wrote {instance.type_code} instance to {args.output}")
    return 0


def cmd_verify(args) -> int:
    source, instance = _build_reduction(args)
    report = reductions.verify_reduction(source, instance)
    verdict = "PASS" if report.equivalent else "FAIL"
    src = "YES" if report.source_answer else "NO"
    tgt = "YES" if report.target_answer else "NO"
    print(f"{instance.type_code} source={src} target={tgt} {verdict}")
    return 0 if report.equivalent else 1


def cmd_anonymity(args) -> int:
    sid = parse_system(args.system)
    witness = harness.anonymity_falsify(sid, args.trials, seed=args.seed)
    if witness is None:
        print(f"no violation found in {args.trials} trials")
    else:
        print("violation witness:")
        print(f"  candidates {_render_ids(witness.election.candidates)}")
        for b in witness.election.ballots:
            print("  ballot " + " > ".join(map(str, b)))
        pairs = ", ".join(f"{a}->{b}" for a, b in sorted(witness.mapping.items()))
        print(f"  renaming {pairs}")
        print(f"  expected {_render_ids(witness.expected)}"
              f" actual {_render_ids(witness.actual)}")
    return 0


def cmd_suite(args) -> int:
    if args.suite == "replay":
        try:
            results = harness.replay_recorded_scenarios()
        except ReplayMismatch as exc:
            print(f"replay mismatch: {exc}")
            print("FAIL 0/4")
            return 1
        for r in results:
            print(f"ok {r.name}: {r.detail}")
        print(f"PASS {len(results)}/{len(results)}")
        return 0

    rng = random.Random(args.seed)
    if args.suite == "inheritance":
        constituents = tuple(atomic(t) for t in ("plurality", "condorcet", "not_all_one"))
        bad = 0
        for _ in range(args.trials):
            shape = rng.choice(harness._SHAPES)
            goal = rng.choice((CONSTRUCTIVE, DESTRUCTIVE))
            tie = rng.choice((TE, TP))
            index = rng.randrange(len(constituents))
            inst = harness.random_instance(rng, shape, goal, constituents[index], tie)
            if not harness.inheritance_check(constituents, index, inst).equal:
                bad += 1
                print(f"mismatch on {inst!r}")
        verdict = "PASS" if bad == 0 else "FAIL"
        print(f"{verdict} inheritance {args.trials - bad}/{args.trials}")
        return 0 if bad == 0 else 1

    # agreement: sampled polynomial-vs-brute-force checks
    bad = 0
    checked = 0

    def check(decision, instance):
        nonlocal bad, checked
        checked += 1
        if decision.answer != solvers.brute_force_decide(instance).answer:
            bad += 1
            print(f"disagreement on {instance!r}")

    from .systems import hybrid
    two_way = hybrid("e_first", "e_last")
    for _ in range(args.trials):
        goal = rng.choice((CONSTRUCTIVE, DESTRUCTIVE))
        inst = harness.random_instance(rng, "AC", goal, two_way, max_candidates=4,
                                       max_voters=3)
        check(solvers.ccac_hybrid_poly(inst), inst)
        inst = harness.random_instance(rng, "DC", CONSTRUCTIVE, atomic("e1_prefix"),
                                       max_candidates=5, max_voters=4)
        check(solvers.e1_prefix_ccdc_poly(inst), inst)
        inst = harness.random_instance(rng, "RPC", CONSTRUCTIVE, atomic("e1_tri"),
                                       max_candidates=4, max_voters=4)
        check(solvers.e1_tri_ccrpc_poly(inst), inst)
        inst = harness.random_instance(rng, "PC", CONSTRUCTIVE, atomic("e1_tri_even"),
                                       max_candidates=4, max_voters=2)
        check(solvers.e1_tri_even_ccpc_poly(inst), inst)
        for tag in ("e0_dfirst", "e1_second"):
            for shape in ("DC", "PC", "RPC"):
                inst = harness.random_instance(rng, shape, DESTRUCTIVE, atomic(tag),
                                               max_candidates=4, max_voters=3)
                check(solvers.destructive_poly(inst), inst)
    verdict = "PASS" if bad == 0 else "FAIL"
    print(f"{verdict} agreement {checked - bad}/{checked}")
    return 0 if bad == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    systems_help = ("system ids: " + ", ".join(ATOMIC_TAGS)
                    + ", hybrid:<a>,<b>,..., hybrid_base:<a>,<b>;default=<c>")
    parser = argparse.ArgumentParser(
        prog="votectrl",
        description="Election systems, electoral control, and hardness gadgets.",
        epilog=systems_help
        + " | control types: CCAC CCDC CCPC CCRPC CCAV CCDV CCPV and DC*"
        + " counterparts; partition types take 'tie TE|TP'")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"seed for randomized suites (default {DEFAULT_SEED})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("winners", help="evaluate a system on an election file")
    p.add_argument("--system", required=True)
    p.add_argument("--election", required=True)
    p.set_defaults(func=cmd_winners)

    p = sub.add_parser("decide", help="decide a control instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--solver", choices=("brute", "poly"), default="brute")
    p.add_argument("--budget", type=int, default=solvers.DEFAULT_BUDGET)
    p.set_defaults(func=cmd_decide)

    for name, func in (("reduce", cmd_reduce), ("verify", cmd_verify)):
        p = sub.add_parser(name, help=f"{name} a source instance")
        p.add_argument("--from", dest="source", required=True,
                       choices=("x3c", "vc", "ohvc", "ehvc"))
        p.add_argument("--to", required=(name == "reduce"), default="")
        p.add_argument("--input", required=True)
        p.add_argument("--k", type=int, default=None)
        if name == "reduce":
            p.add_argument("--output", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("anonymity", help="search for a candidate-renaming violation")
    p.add_argument("--system", required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.set_defaults(func=cmd_anonymity)

    p = sub.add_parser("suite", help="run a verification suite")
    p.add_argument("suite", choices=("replay", "inheritance", "agreement"))
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if getattr(args, "command", None) == "verify" and not args.to:
        defaults = {"x3c": "DCDV", "vc": "CCDC", "ohvc": "CCRPC", "ehvc": "CCPC"}
        args.to = defaults[args.source]
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, InvalidName, WrongSystem, VotectrlError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
