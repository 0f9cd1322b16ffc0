import random

import pytest
from hypothesis import given, settings, strategies as st

from votectrl.control import (
    AddCandidates, AddSet, AddVoters, CandidatePartition, DeleteCandidates,
    DeleteSet, DeleteVoters, PartitionCandidates, PartitionVoters,
    RunoffPartitionCandidates, VoterPartition,
    CONSTRUCTIVE, DESTRUCTIVE, TE, TP, goal_met,
)
from votectrl.errors import BudgetExceeded, NoDeciderRegistered, WrongSystem
from votectrl.harness import random_instance, _SHAPES
from votectrl.solvers import (
    Decision, brute_force_decide, ccac_hybrid_poly, destructive_poly,
    e1_prefix_ccdc_poly, e1_tri_ccrpc_poly, e1_tri_even_ccpc_poly,
    route_and_solve_voters, _partition_voters_anonymous, CachedEvaluator,
)
from votectrl.systems import atomic, hybrid, raw_winners

TWO_WAY = hybrid("e_first", "e_last")
PLURALITY = atomic("plurality")


def test_ccac_example_witness():
    inst = AddCandidates(TWO_WAY, frozenset({0, 2}), frozenset({1}), 0,
                         ((2, 1, 0),), CONSTRUCTIVE)
    d = brute_force_decide(inst)
    assert d == Decision(True, AddSet(frozenset({1})))


def test_dcpc_on_e1_second_always_isolates_c():
    inst = PartitionCandidates(atomic("e1_second"), frozenset({0, 1, 2}), 0,
                               ((1, 0, 2),), TE, DESTRUCTIVE)
    d = brute_force_decide(inst)
    assert d.answer and goal_met(inst, d.witness)


def test_already_winning_needs_no_deletion():
    inst = DeleteCandidates(PLURALITY, frozenset({1, 2}), 1, ((1, 2),), 1,
                            CONSTRUCTIVE)
    assert brute_force_decide(inst) == Decision(True, DeleteSet(frozenset()))


def test_witness_order_subsets_by_size_then_lex():
    # both {1} and {2} work; the lexicographically first small set wins
    inst = DeleteCandidates(PLURALITY, frozenset({0, 1, 2}), 0,
                            ((1, 0, 2), (2, 0, 1), (0, 1, 2)), 2, CONSTRUCTIVE)
    d = brute_force_decide(inst)
    assert d.answer
    assert d.witness == DeleteSet(frozenset({1}))


def test_partition_witness_order_mask_ascending():
    # every partition works for destructive e1_second; mask 0 is (∅, C)
    inst = RunoffPartitionCandidates(atomic("e1_second"), frozenset({0, 1}),
                                     0, ((1, 0),), TE, DESTRUCTIVE)
    d = brute_force_decide(inst)
    assert d.witness == CandidatePartition(frozenset(), frozenset({0, 1}))


def test_destructive_dc_never_deletes_distinguished():
    inst = DeleteCandidates(PLURALITY, frozenset({0, 1}), 0, ((0, 1),), 2,
                            DESTRUCTIVE)
    d = brute_force_decide(inst)
    assert d.answer is False  # deleting 1 leaves 0 the sole winner


def test_budget_exceeded():
    ballots = tuple((0, 1) for _ in range(30))
    inst = DeleteVoters(PLURALITY, frozenset({0, 1}), 1, ballots, 15, CONSTRUCTIVE)
    with pytest.raises(BudgetExceeded):
        brute_force_decide(inst, budget=1000)


def test_decisions_are_deterministic():
    rng = random.Random(5)
    for _ in range(25):
        shape = rng.choice(_SHAPES)
        inst = random_instance(rng, shape, rng.choice((CONSTRUCTIVE, DESTRUCTIVE)),
                               PLURALITY, tie=rng.choice((TE, TP)))
        assert brute_force_decide(inst) == brute_force_decide(inst)


def naive_partition_voters(instance):
    evaluate = CachedEvaluator(instance.system)
    n = len(instance.ballots)
    for mask in range(2 ** n):
        action = VoterPartition(frozenset(i for i in range(n) if mask >> i & 1))
        if goal_met(instance, action, evaluate):
            return Decision(True, action)
    return Decision(False, None)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_anonymous_voter_partition_matches_naive_enumeration(data):
    m = data.draw(st.integers(1, 3))
    cands = frozenset(range(m))
    order = sorted(cands)
    ballots = tuple(data.draw(st.lists(
        st.permutations(order).map(tuple), max_size=6)))
    sid = data.draw(st.sampled_from([PLURALITY, atomic("not_all_one"),
                                     atomic("condorcet")]))
    inst = PartitionVoters(sid, cands, data.draw(st.sampled_from(order)),
                           ballots, data.draw(st.sampled_from((TE, TP))),
                           data.draw(st.sampled_from((CONSTRUCTIVE, DESTRUCTIVE))))
    fast = _partition_voters_anonymous(inst, CachedEvaluator(sid), 2 ** 24)
    assert fast == naive_partition_voters(inst)


# --- polynomial deciders -----------------------------------------------------


def test_ccac_poly_replays_the_add_example():
    inst = AddCandidates(TWO_WAY, frozenset({0, 2}), frozenset({1}), 0,
                         ((2, 1, 0),), CONSTRUCTIVE)
    d = ccac_hybrid_poly(inst)
    assert d.answer and goal_met(inst, d.witness)
    assert 1 in d.witness.added  # found by forcing in the odd spoiler


def test_ccac_poly_requires_hybrid():
    inst = AddCandidates(PLURALITY, frozenset({0}), frozenset({1}), 0,
                         ((0, 1),), CONSTRUCTIVE)
    with pytest.raises(WrongSystem):
        ccac_hybrid_poly(inst)


def test_ccac_poly_uniform_residue_delegation():
    inst = AddCandidates(TWO_WAY, frozenset({0, 2}), frozenset({4}), 0,
                         ((0, 2, 4),), CONSTRUCTIVE)
    assert ccac_hybrid_poly(inst).answer == brute_force_decide(inst).answer


def test_ccac_poly_missing_decider():
    inst = AddCandidates(TWO_WAY, frozenset({0, 2}), frozenset({1}), 0,
                         ((2, 1, 0),), CONSTRUCTIVE)
    with pytest.raises(NoDeciderRegistered):
        ccac_hybrid_poly(inst, deciders={})


def test_e1_prefix_ccdc_poly_example():
    inst = DeleteCandidates(atomic("e1_prefix"), frozenset({0, 1, 2, 3, 4}), 0,
                            ((1, 2, 0, 3, 4), (2, 0, 1, 3, 4)), 2, CONSTRUCTIVE)
    d = e1_prefix_ccdc_poly(inst)
    assert d.answer and goal_met(inst, d.witness)


def test_e1_prefix_ccdc_poly_single_voter_rejects():
    inst = DeleteCandidates(atomic("e1_prefix"), frozenset({0, 1}), 0,
                            ((1, 0),), 1, CONSTRUCTIVE)
    assert e1_prefix_ccdc_poly(inst).answer is False


def test_e1_prefix_ccdc_poly_rejects_wrong_shape():
    inst = DeleteCandidates(PLURALITY, frozenset({0}), 0, ((0,),), 0, CONSTRUCTIVE)
    with pytest.raises(WrongSystem):
        e1_prefix_ccdc_poly(inst)


def test_e1_tri_ccrpc_poly():
    good = RunoffPartitionCandidates(atomic("e1_tri"), frozenset({4, 6}), 4,
                                     ((4, 6),), TE, CONSTRUCTIVE)
    d = e1_tri_ccrpc_poly(good)
    assert d.answer
    assert d.witness == CandidatePartition(frozenset({4}), frozenset({6}))
    # three voters is not of the form 1 + n(n-1)/2
    bad = RunoffPartitionCandidates(atomic("e1_tri"), frozenset({4, 6}), 4,
                                    ((4, 6),) * 3, TE, CONSTRUCTIVE)
    assert e1_tri_ccrpc_poly(bad).answer is False


def test_e1_tri_even_ccpc_poly():
    inst = PartitionCandidates(atomic("e1_tri_even"), frozenset({4, 6}), 4,
                               ((4, 6), (4, 6)), TE, CONSTRUCTIVE)
    assert e1_tri_even_ccpc_poly(inst).answer == brute_force_decide(inst).answer
    odd = PartitionCandidates(atomic("e1_tri_even"), frozenset({4, 6}), 4,
                              ((4, 6),) * 3, TE, CONSTRUCTIVE)
    assert e1_tri_even_ccpc_poly(odd).answer is False


def test_destructive_poly_k_gt_zero_on_e1_second():
    inst = DeleteCandidates(atomic("e1_second"), frozenset({2, 4}), 2,
                            ((4, 2),), 1, DESTRUCTIVE)
    d = destructive_poly(inst)
    assert d.answer and goal_met(inst, d.witness)


def test_destructive_poly_partition_always_works_on_e1_second():
    inst = PartitionCandidates(atomic("e1_second"), frozenset({0, 1, 2}), 0,
                               ((1, 0, 2),) * 5, TP, DESTRUCTIVE)
    d = destructive_poly(inst)
    assert d.witness == CandidatePartition(frozenset({0}), frozenset({1, 2}))
    assert goal_met(inst, d.witness)


def test_destructive_poly_e0_dfirst_needs_enough_deletions():
    # one voter ranking c first: all rivals must go
    base = dict(system=atomic("e0_dfirst"), candidates=frozenset({0, 1, 2}),
                distinguished=0, ballots=((0, 1, 2),), goal=DESTRUCTIVE)
    assert destructive_poly(DeleteCandidates(limit=1, **base)).answer is False
    d = destructive_poly(DeleteCandidates(limit=2, **base))
    assert d == Decision(True, DeleteSet(frozenset({1, 2})))
    assert brute_force_decide(DeleteCandidates(limit=1, **base)).answer is False


def test_destructive_poly_rejects_constructive():
    inst = DeleteCandidates(atomic("e1_second"), frozenset({0, 1}), 0,
                            ((1, 0),), 1, CONSTRUCTIVE)
    with pytest.raises(WrongSystem):
        destructive_poly(inst)


def test_route_and_solve_voters_matches_brute_force():
    rng = random.Random(9)
    sid = hybrid("plurality", "condorcet")
    for _ in range(40):
        shape = rng.choice(("AV", "DV", "PV"))
        inst = random_instance(rng, shape, rng.choice((CONSTRUCTIVE, DESTRUCTIVE)),
                               sid, tie=rng.choice((TE, TP)))
        assert route_and_solve_voters(inst).answer == brute_force_decide(inst).answer


def test_route_and_solve_voters_rejects_candidate_control():
    inst = DeleteCandidates(TWO_WAY, frozenset({0}), 0, ((0,),), 0, CONSTRUCTIVE)
    with pytest.raises(WrongSystem):
        route_and_solve_voters(inst)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_true_decisions_carry_sound_witnesses(data):
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    shape = data.draw(st.sampled_from(_SHAPES))
    sid = data.draw(st.sampled_from(
        [PLURALITY, atomic("not_all_one"), TWO_WAY]))
    inst = random_instance(rng, shape,
                           data.draw(st.sampled_from((CONSTRUCTIVE, DESTRUCTIVE))),
                           sid, tie=data.draw(st.sampled_from((TE, TP))))
    d = brute_force_decide(inst)
    if d.answer:
        assert goal_met(inst, d.witness)
    else:
        assert d.witness is None


def test_k_monotonicity_for_delete_voters():
    rng = random.Random(3)
    for _ in range(30):
        inst = random_instance(rng, "DV", rng.choice((CONSTRUCTIVE, DESTRUCTIVE)),
                               PLURALITY)
        answers = []
        for k in range(len(inst.ballots) + 1):
            answers.append(brute_force_decide(
                DeleteVoters(inst.system, inst.candidates, inst.distinguished,
                             inst.ballots, k, inst.goal)).answer)
        # once achievable, a larger allowance can only keep it achievable
        assert answers == sorted(answers)
