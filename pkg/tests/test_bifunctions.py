"""Bifunction catalog values and monotonicity-class checkers."""

import math

import numpy as np
import pytest

from vvilab import DomainSampler, Euclidean, LimitSchedule, Point, PositiveOrthant, Tangent, log_map
from vvilab import catalog
from vvilab.bifunctions import (
    check_monotone,
    check_pseudomonotone,
    check_strictly_pseudomonotone,
    check_subadditive_poshom,
    check_upper_sign_continuous,
)
from vvilab.cone import in_set
from vvilab.dini import dini_vector
from vvilab.vilab import build_problem

ORTH1 = PositiveOrthant(1)
EUC1 = Euclidean(1)


def _inst(instance_id, **kw):
    return build_problem(catalog.get_instance(instance_id), **kw)


def test_eval_catalog_worked_values():
    p = Point(ORTH1, (1.0,))
    out = catalog.eval_catalog("paper-monotone", p, Tangent(p, (1.0,)))
    np.testing.assert_allclose(out, [-1.0, -1.0], atol=1e-15)
    pe = Point(ORTH1, (math.e,))
    out = catalog.eval_catalog("paper-monotone", pe, Tangent(pe, (0.0,)))
    np.testing.assert_allclose(out, [-math.e, 0.0], atol=1e-15)


def test_eval_catalog_unknown_id():
    with pytest.raises(KeyError):
        catalog.get_bifunction("no-such-h")


def test_dini_adapter_matches_direct_estimate():
    sched = LimitSchedule()
    phi = catalog.get_objective("biobjective-quadratic")
    h = catalog.get_bifunction("dini:biobjective-quadratic", sched)
    p = Point(ORTH1, (1.5,))
    v = Tangent(p, (0.7,))
    np.testing.assert_array_equal(h.eval(p, v), dini_vector(phi, p, v, sched, "upper"))


def test_monotone_sum_identity_on_log_grid():
    # h(p, log_p q) + h(q, log_q p) collapses to (-p-q, -(ln p - ln q)^2)
    inst = _inst("paper-monotone")
    h = inst.bifunction
    pts = inst.sampler.points()
    assert len(pts) == 64
    for p in pts:
        for q in pts:
            if p.coords == q.coords:
                continue
            s = h.eval(p, log_map(p, q)) + h.eval(q, log_map(q, p))
            expected = np.array([
                -p.coords[0] - q.coords[0],
                -((math.log(p.coords[0]) - math.log(q.coords[0])) ** 2),
            ])
            np.testing.assert_allclose(s, expected, atol=1e-10)


def test_monotone_worked_instance_holds():
    inst = _inst("paper-monotone")
    assert check_monotone(inst.bifunction, inst.sampler).holds


def test_monotone_trivial_cases():
    sampler = DomainSampler(EUC1, ((0.0, 1.0),), grid_n=6)
    assert check_monotone(catalog.get_bifunction("zero"), sampler).holds
    out = check_monotone(catalog.get_bifunction("ones"), sampler)
    assert out.verdict == "counterexample"
    np.testing.assert_allclose(out.witness.data["sum"], [2.0, 2.0])


def test_pseudomonotone_paper_instance_with_exhaustive_oracle():
    # oracle: direct evaluation of the implication over the full grid
    inst = _inst("paper-monotone")
    h = inst.bifunction
    pts = inst.sampler.points()
    for p in pts:
        for q in pts:
            if p.coords == q.coords:
                continue
            fwd = h.eval(p, log_map(p, q))
            if not in_set(fwd, "neg_cone_minus_zero", 1e-9):
                back = h.eval(q, log_map(q, p))
                assert not in_set(back, "pos_cone_minus_zero", 1e-9)
    assert check_pseudomonotone(h, inst.sampler).holds


def test_pseudomonotone_trivial_and_linear():
    sampler = DomainSampler(EUC1, ((0.0, 1.0),), grid_n=6)
    assert check_pseudomonotone(catalog.get_bifunction("zero"), sampler).holds
    inst = _inst("linear-ez")
    assert check_pseudomonotone(inst.bifunction, inst.sampler, max_pairs=600).holds


def test_strictly_pseudomonotone_linear_holds_zero_fails():
    inst = _inst("linear-ez")
    assert check_strictly_pseudomonotone(inst.bifunction, inst.sampler, max_pairs=600).holds
    sampler = DomainSampler(EUC1, ((0.0, 1.0),), grid_n=6)
    out = check_strictly_pseudomonotone(catalog.get_bifunction("zero"), sampler)
    assert out.verdict == "counterexample"


def test_strictly_pseudomonotone_paper_instance_oracle_verdict():
    # verdict established by an oracle sweep over the log grid: whenever the
    # antecedent fires, the swapped second component is strictly negative
    inst = _inst("paper-monotone")
    h = inst.bifunction
    pts = inst.sampler.points()
    fired = 0
    for p in pts:
        for q in pts:
            if p.coords == q.coords:
                continue
            if not in_set(h.eval(p, log_map(p, q)), "neg_cone_minus_zero", 1e-9):
                fired += 1
                assert in_set(h.eval(q, log_map(q, p)), "neg_interior", 1e-9)
    assert fired > 0
    assert check_strictly_pseudomonotone(h, inst.sampler).holds


def test_strict_implies_plain_on_same_samples():
    for instance_id in ("linear-ez", "paper-monotone"):
        inst = _inst(instance_id)
        if check_strictly_pseudomonotone(inst.bifunction, inst.sampler, max_pairs=500).holds:
            assert check_pseudomonotone(inst.bifunction, inst.sampler, max_pairs=500).holds


def test_upper_sign_continuous_smooth_adapter_holds():
    inst = _inst("scaled-identity")
    assert check_upper_sign_continuous(inst.bifunction, inst.sampler, max_pairs=300).holds


def test_upper_sign_continuous_trivial_cases():
    sampler = DomainSampler(EUC1, ((0.0, 1.0),), grid_n=5)
    # zero passes both sides of the implication
    assert check_upper_sign_continuous(catalog.get_bifunction("zero"), sampler).holds
    out = check_upper_sign_continuous(catalog.get_bifunction("neg-ones"), sampler)
    assert out.verdict == "counterexample"


def test_upper_sign_paper_bifunction_fails():
    inst = _inst("paper-monotone")
    out = check_upper_sign_continuous(inst.bifunction, inst.sampler, max_pairs=400)
    assert out.verdict == "counterexample"


def test_subadditive_poshom_cases():
    sampler = DomainSampler(EUC1, ((0.0, 1.0),), grid_n=5)
    assert check_subadditive_poshom(catalog.get_bifunction("half-line-linear"), sampler).holds
    assert check_subadditive_poshom(catalog.get_bifunction("abs-v"), sampler).holds
    out = check_subadditive_poshom(catalog.get_bifunction("square-v"), sampler)
    assert out.verdict == "counterexample"
    assert out.witness.data["kind"] == "homogeneity"


def test_unknown_objective_in_adapter():
    with pytest.raises(KeyError):
        catalog.get_bifunction("dini:no-such-objective")
