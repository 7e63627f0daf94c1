"""Brute-force grid solvers and the theorem-verification harness.

The solvers evaluate the defining predicates of the Stampacchia-type
problem (nvvip), the Minty-type problem (mnvvip) and the vector
optimization problem (nvop, efficient and weakly efficient sets) over the
instance's candidate grid.  "For all q in S" always means "for all q in
the grid"; reports record the grid so verdicts are reproducible.

``verify_theorem`` runs the hypothesis checkers a solution-set relation
depends on, computes the relevant sets, and reports whether the claimed
inclusion/equality/uniqueness holds on the grid.  Failed hypotheses do not
abort the run: the relation is still computed but marked as not covered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import catalog
from .bifunctions import (
    Bifunction,
    check_monotone,
    check_positive_homogeneity,
    check_pseudomonotone,
    check_reversal_homogeneity,
    check_strictly_pseudomonotone,
    check_subadditive_poshom,
    check_upper_sign_continuous,
    ext_diff,
)
from .cone import DEFAULT_TOL, exclusion_slack, in_set, membership_slack
from .convexity import (
    check_dini_envelope,
    check_geodesic_quasiconvex,
    check_h_convex,
    check_h_pseudoconvex,
    check_h_quasiconvex,
)
from .dini import LimitSchedule, ObjectiveFn
from .manifolds import GeodesicMode, HyperbolaCurve, Point, Tangent, exp_map, log_map
from .sampling import (
    CheckOutcome,
    DomainSampler,
    Witness,
    fail_outcome,
    hold_outcome,
    select_pairs,
)

DEFAULT_MAX_PAIRS = 2000

PROBLEMS = ("nvvip", "mnvvip", "nvop-eff", "nvop-weak")

WEAK_READING_NOTE = (
    "weak efficiency read as: no feasible q with Phi(q) - Phi(p) in -int R+^m "
    "(the strict-domination-free reading)"
)


@dataclass(frozen=True)
class ProblemInstance:
    """A solvable instance: candidate grid plus objective and/or bifunction."""

    id: str
    sampler: DomainSampler
    objective: Optional[ObjectiveFn] = None
    bifunction: Optional[Bifunction] = None
    sched: LimitSchedule = LimitSchedule()

    def __post_init__(self):
        if self.objective is None and self.bifunction is None:
            raise ValueError("instance needs an objective or a bifunction")

    def describe(self) -> dict:
        return {
            "id": self.id,
            "sampler": self.sampler.describe(),
            "objective": self.objective.id if self.objective else None,
            "bifunction": self.bifunction.id if self.bifunction else None,
            "dini_schedule": self.sched.describe(),
        }


def build_problem(
    spec: catalog.InstanceSpec,
    sched: LimitSchedule = LimitSchedule(),
    seed: Optional[int] = None,
    grid_n: Optional[int] = None,
    box: Optional[Tuple[Tuple[float, float], ...]] = None,
    mode: Optional[str] = None,
) -> ProblemInstance:
    """Wire a catalog instance spec into evaluable components."""
    manifold = spec.manifold
    if mode is not None and isinstance(manifold, HyperbolaCurve):
        manifold = HyperbolaCurve(GeodesicMode(mode))
    objective = None
    if spec.objective is not None:
        objective = catalog.get_objective(spec.objective)
        if objective.manifold != manifold:
            objective = replace(objective, manifold=manifold)
    bifunction = None
    if spec.bifunction is not None:
        if spec.bifunction.startswith(catalog.ADAPTER_PREFIXES):
            _, obj_id = catalog.split_adapter_id(spec.bifunction)
            base_phi = catalog.get_objective(obj_id)
            if base_phi.manifold != manifold:
                base_phi = replace(base_phi, manifold=manifold)
            bifunction = catalog.adapter_from_objective(spec.bifunction, base_phi, sched)
        else:
            bifunction = catalog.get_bifunction(spec.bifunction, sched)
            if bifunction.manifold != manifold:
                bifunction = replace(bifunction, manifold=manifold)
    sampler = DomainSampler(
        manifold=manifold,
        box=box if box is not None else spec.box,
        grid_n=grid_n if grid_n is not None else spec.grid_n,
        seed=seed if seed is not None else spec.seed,
        extra_random=spec.extra_random,
        spacing=spec.spacing,
    )
    return ProblemInstance(spec.id, sampler, objective, bifunction, sched)


@dataclass
class SolutionSet:
    problem: str
    points: List[Point]
    marginal: List[Point]
    tol: float
    grid_size: int
    note: str = ""

    def coord_set(self) -> set:
        return {p.coords for p in self.points}

    def describe(self) -> dict:
        out = {
            "problem": self.problem,
            "tol": self.tol,
            "grid_size": self.grid_size,
            "solutions": [list(p.coords) for p in self.points],
            "marginal": [list(p.coords) for p in self.marginal],
        }
        if self.note:
            out["note"] = self.note
        return out


def _sift(
    grid: List[Point],
    predicate_value: Callable[[int, int], np.ndarray],
    excluded_set: str,
    problem: str,
    tol: float,
    note: str = "",
) -> SolutionSet:
    # keep p iff its predicate vector avoids excluded_set for every other grid q
    sols: List[Point] = []
    marg: List[Point] = []
    for i, p in enumerate(grid):
        ok = True
        min_slack = math.inf
        for j in range(len(grid)):
            if i == j:
                continue
            val = predicate_value(i, j)
            if in_set(val, excluded_set, tol):
                ok = False
                break
            min_slack = min(min_slack, exclusion_slack(val, excluded_set, tol))
        if ok:
            sols.append(p)
            if min_slack <= tol:
                marg.append(p)
    return SolutionSet(problem, sols, marg, tol, len(grid), note)


def solve_nvvip(inst: ProblemInstance, tol: float = DEFAULT_TOL) -> SolutionSet:
    """Grid points whose bifunction values toward every q avoid -cone minus zero."""
    if inst.bifunction is None:
        raise ValueError("nvvip needs a bifunction")
    grid = inst.sampler.points()
    h = inst.bifunction

    def value(i: int, j: int) -> np.ndarray:
        return h.eval(grid[i], log_map(grid[i], grid[j]))

    return _sift(grid, value, "neg_cone_minus_zero", "nvvip", tol)


def solve_mnvvip(inst: ProblemInstance, tol: float = DEFAULT_TOL) -> SolutionSet:
    """Grid points p with h(q, log_q p) outside +cone minus zero for every q."""
    if inst.bifunction is None:
        raise ValueError("mnvvip needs a bifunction")
    grid = inst.sampler.points()
    h = inst.bifunction

    def value(i: int, j: int) -> np.ndarray:
        return h.eval(grid[j], log_map(grid[j], grid[i]))

    return _sift(grid, value, "pos_cone_minus_zero", "mnvvip", tol)


def solve_nvop(inst: ProblemInstance, tol: float = DEFAULT_TOL, kind: str = "efficient") -> SolutionSet:
    """Pareto-minimal grid points of the vector objective.

    ``kind="efficient"`` excludes points dominated in the -cone minus zero
    sense; ``kind="weak"`` only excludes strict domination (every component
    better).  The efficient set is always contained in the weak one.
    """
    if inst.objective is None:
        raise ValueError("nvop needs an objective")
    if kind not in ("efficient", "weak"):
        raise ValueError("kind must be 'efficient' or 'weak'")
    grid = inst.sampler.points()
    values = [inst.objective.eval(p) for p in grid]

    def value(i: int, j: int) -> np.ndarray:
        return values[j] - values[i]

    excluded = "neg_cone_minus_zero" if kind == "efficient" else "neg_interior"
    problem = "nvop_efficient" if kind == "efficient" else "nvop_weak"
    note = "" if kind == "efficient" else WEAK_READING_NOTE
    return _sift(grid, value, excluded, problem, tol, note)


def check_increment_domination(
    phi: ObjectiveFn,
    h: Bifunction,
    sampler: DomainSampler,
    tol: float = DEFAULT_TOL,
    max_pairs: Optional[int] = None,
) -> CheckOutcome:
    """h(p, log_p q) - (Phi(q) - Phi(p)) must land strictly inside +int R^m."""
    pts = sampler.points()
    checked = 0
    for i, j in select_pairs(pts, ordered=True, max_pairs=max_pairs):
        p, q = pts[i], pts[j]
        gap = ext_diff(h.eval(p, log_map(p, q)), phi.eval(q) - phi.eval(p))
        checked += 1
        if not in_set(gap, "pos_interior", tol):
            w = Witness(
                "increment-domination",
                {"objective": phi.id, "bifunction": h.id, "manifold": h.manifold.describe(), "tol": tol},
                {"p": list(p.coords), "q": list(q.coords), "gap": [float(x) for x in gap]},
                exclusion_slack(gap, "pos_interior", tol),
            )
            return fail_outcome(checked, w)
    return hold_outcome(checked)


def check_w_set_convex(
    inst: ProblemInstance,
    at_point: Optional[Point] = None,
    tol: float = DEFAULT_TOL,
    t_set: Sequence[float] = (0.25, 0.5, 0.75),
) -> CheckOutcome:
    """Geodesic convexity of the log image of the strict descent set.

    W collects the grid points q whose bifunction value at ``at_point`` lies
    strictly inside -int R^m; the check verifies that exp-combinations of
    W members stay in W.  Requires h subadditive and positively homogeneous
    in its second argument; a failure of that prerequisite is reported as a
    hypothesis violation, not as a convexity counterexample.
    """
    if inst.bifunction is None:
        raise ValueError("w-set convexity needs a bifunction")
    h = inst.bifunction
    grid = inst.sampler.points()
    p = at_point if at_point is not None else grid[len(grid) // 2]
    hyp = check_subadditive_poshom(h, inst.sampler, tol)
    if not hyp.holds:
        return CheckOutcome(
            "counterexample",
            hyp.samples_checked,
            hyp.witness,
            note="hypothesis violation: bifunction is not subadditive and positively homogeneous",
        )
    members = [q for q in grid if q != p and in_set(h.eval(p, log_map(p, q)), "neg_interior", tol)]
    if not members:
        return hold_outcome(hyp.samples_checked, note="vacuous: descent set W is empty on the grid")
    checked = hyp.samples_checked
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            u = log_map(p, members[a])
            v = log_map(p, members[b])
            for t in t_set:
                combo = u.scaled(1.0 - t) + v.scaled(t)
                x = exp_map(p, combo)
                val = h.eval(p, log_map(p, x))
                checked += 1
                if not in_set(val, "neg_interior", tol):
                    w = Witness(
                        "w-set-convex",
                        {
                            "bifunction": h.id,
                            "manifold": h.manifold.describe(),
                            "tol": tol,
                            "t_set": list(t_set),
                        },
                        {
                            "p": list(p.coords),
                            "q1": list(members[a].coords),
                            "q2": list(members[b].coords),
                            "t": float(t),
                            "combined_point": list(x.coords),
                            "value": [float(s) for s in val],
                        },
                        exclusion_slack(val, "neg_interior", tol),
                    )
                    return fail_outcome(checked, w)
    return hold_outcome(checked)


# -- theorem harness ----------------------------------------------------------


@dataclass
class TheoremReport:
    theorem_id: str
    claim: str
    hypotheses: List[dict]
    hypotheses_pass: bool
    claim_holds: bool
    status: str  # confirmed_on_grid | violated | hypotheses_failed
    covered_by_theorem: bool
    witness: Optional[dict] = None
    details: dict = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def describe(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "claim": self.claim,
            "hypotheses": self.hypotheses,
            "hypotheses_pass": self.hypotheses_pass,
            "claim_holds_on_grid": self.claim_holds,
            "status": self.status,
            "covered_by_theorem": self.covered_by_theorem,
            "witness": self.witness,
            "details": self.details,
            "notes": self.notes,
        }


def _solution_subset(sub: SolutionSet, sup: SolutionSet) -> Tuple[bool, Optional[dict]]:
    missing = [p for p in sub.points if p.coords not in sup.coord_set()]
    if missing:
        return False, {
            "kind": "inclusion-violation",
            "sub": sub.problem,
            "sup": sup.problem,
            "missing": [list(p.coords) for p in missing],
        }
    return True, None


def _needs(inst: ProblemInstance, objective: bool, bifunction: bool, theorem_id: str) -> None:
    if objective and inst.objective is None:
        raise ValueError(f"theorem {theorem_id!r} needs an instance with an objective")
    if bifunction and inst.bifunction is None:
        raise ValueError(f"theorem {theorem_id!r} needs an instance with a bifunction")


def verify_theorem(
    theorem_id: str,
    inst: ProblemInstance,
    tol: float = DEFAULT_TOL,
    hconvex_form: str = "componentwise",
    max_pairs: Optional[int] = DEFAULT_MAX_PAIRS,
) -> TheoremReport:
    """Check a solution-set relation together with its hypotheses on the grid."""
    try:
        definition = THEOREMS[theorem_id]
    except KeyError:
        raise KeyError(f"unknown theorem id {theorem_id!r}; known: {sorted(THEOREMS)}") from None
    return definition(inst, tol, hconvex_form, max_pairs)


def _hyp_entry(name: str, outcome: CheckOutcome) -> dict:
    return {
        "name": name,
        "verdict": outcome.verdict,
        "samples_checked": outcome.samples_checked,
        "witness": outcome.witness.describe() if outcome.witness else None,
    }


def _report(theorem_id, claim, hyps, claim_holds, witness, details, notes) -> TheoremReport:
    hyps_pass = all(e["verdict"] == "holds_on_samples" for e in hyps)
    if not hyps_pass:
        status = "hypotheses_failed"
    elif claim_holds:
        status = "confirmed_on_grid"
    else:
        status = "violated"
    return TheoremReport(
        theorem_id=theorem_id,
        claim=claim,
        hypotheses=hyps,
        hypotheses_pass=hyps_pass,
        claim_holds=claim_holds,
        status=status,
        covered_by_theorem=hyps_pass,
        witness=witness,
        details=details,
        notes=notes,
    )


def _thm_minty_equivalence(inst, tol, hconvex_form, max_pairs):
    _needs(inst, objective=False, bifunction=True, theorem_id="minty-equivalence")
    h, sampler = inst.bifunction, inst.sampler
    hyps = [
        _hyp_entry("pseudomonotone", check_pseudomonotone(h, sampler, tol, max_pairs)),
        _hyp_entry("upper-sign-continuous", check_upper_sign_continuous(h, sampler, tol, max_pairs=max_pairs)),
        _hyp_entry("positive-homogeneity", check_positive_homogeneity(h, sampler, tol)),
    ]
    st = solve_nvvip(inst, tol)
    mn = solve_mnvvip(inst, tol)
    equal = st.coord_set() == mn.coord_set()
    witness = None
    if not equal:
        witness = {
            "kind": "set-difference",
            "nvvip_only": sorted(list(c) for c in st.coord_set() - mn.coord_set()),
            "mnvvip_only": sorted(list(c) for c in mn.coord_set() - st.coord_set()),
        }
    details = {"nvvip": st.describe(), "mnvvip": mn.describe()}
    return _report("minty-equivalence", "nvvip solution set equals mnvvip solution set on the grid",
                   hyps, equal, witness, details, [])


def _thm_uniqueness(inst, tol, hconvex_form, max_pairs):
    _needs(inst, objective=False, bifunction=True, theorem_id="uniqueness")
    hyps = [
        _hyp_entry("strictly-pseudomonotone",
                   check_strictly_pseudomonotone(inst.bifunction, inst.sampler, tol, max_pairs)),
    ]
    st = solve_nvvip(inst, tol)
    holds = len(st.points) <= 1
    witness = None if holds else {"kind": "multiple-solutions", "solutions": [list(p.coords) for p in st.points]}
    return _report("uniqueness", "the nvvip solution set has at most one point",
                   hyps, holds, witness, {"nvvip": st.describe()}, [])


def _thm_quasiconvex_transfer(inst, tol, hconvex_form, max_pairs):
    _needs(inst, objective=True, bifunction=True, theorem_id="quasiconvex-transfer")
    phi, h, sampler = inst.objective, inst.bifunction, inst.sampler
    hyps = [
        _hyp_entry("geodesic-quasiconvex", check_geodesic_quasiconvex(phi, sampler, tol, max_pairs)),
        _hyp_entry("dini-envelope-upper",
                   check_dini_envelope(phi, h, sampler, inst.sched, tol, "upper", max_pairs)),
    ]
    claim = check_h_quasiconvex(phi, h, sampler, tol, max_pairs)
    witness = claim.witness.describe() if claim.witness else None
    return _report("quasiconvex-transfer",
                   "the objective is h-quasiconvex on the sample set",
                   hyps, claim.holds, witness, {"h_quasiconvex": claim.describe()}, [])


def _thm_pseudoconvex_transfer(inst, tol, hconvex_form, max_pairs):
    _needs(inst, objective=True, bifunction=True, theorem_id="pseudoconvex-transfer")
    phi, h, sampler = inst.objective, inst.bifunction, inst.sampler
    hyps = [
        _hyp_entry("h-pseudoconvex", check_h_pseudoconvex(phi, h, sampler, tol, max_pairs)),
        _hyp_entry("dini-envelope-upper",
                   check_dini_envelope(phi, h, sampler, inst.sched, tol, "upper", max_pairs)),
        _hyp_entry("reversal-homogeneity", check_reversal_homogeneity(h, sampler, tol)),
    ]
    qc = check_geodesic_quasiconvex(phi, sampler, tol, max_pairs)
    hqc = check_h_quasiconvex(phi, h, sampler, tol, max_pairs)
    holds = qc.holds and hqc.holds
    src = qc if not qc.holds else hqc
    witness = src.witness.describe() if (not holds and src.witness) else None
    return _report("pseudoconvex-transfer",
                   "the objective is geodesic quasiconvex and h-quasiconvex on the sample set",
                   hyps, holds, witness,
                   {"geodesic_quasiconvex": qc.describe(), "h_quasiconvex": hqc.describe()}, [])


def _thm_efficient_solves_stampacchia(inst, tol, hconvex_form, max_pairs):
    _needs(inst, objective=True, bifunction=True, theorem_id="efficient-solves-stampacchia")
    hyps = [
        _hyp_entry("dini-envelope-lower",
                   check_dini_envelope(inst.objective, inst.bifunction, inst.sampler,
                                       inst.sched, tol, "lower", max_pairs)),
    ]
    eff = solve_nvop(inst, tol, "efficient")
    st = solve_nvvip(inst, tol)
    holds, witness = _solution_subset(eff, st)
    return _report("efficient-solves-stampacchia",
                   "every efficient nvop point on the grid solves nvvip",
                   hyps, holds, witness, {"nvop_efficient": eff.describe(), "nvvip": st.describe()}, [])


def _thm_weak_efficient_solves_stampacchia(inst, tol, hconvex_form, max_pairs):
    _needs(inst, objective=True, bifunction=True, theorem_id="weak-efficient-solves-stampacchia")
    hyps = [
        _hyp_entry("increment-domination",
                   check_increment_domination(inst.objective, inst.bifunction, inst.sampler, tol, max_pairs)),
    ]
    weak = solve_nvop(inst, tol, "weak")
    st = solve_nvvip(inst, tol)
    holds, witness = _solution_subset(weak, st)
    reverse, _ = _solution_subset(st, weak)
    notes = [WEAK_READING_NOTE, f"reverse inclusion (nvvip within weak nvop) on this grid: {reverse}"]
    return _report("weak-efficient-solves-stampacchia",
                   "every weakly efficient nvop point on the grid solves nvvip",
                   hyps, holds, witness, {"nvop_weak": weak.describe(), "nvvip": st.describe()}, notes)


def _thm_hconvex_solves_minty(inst, tol, hconvex_form, max_pairs):
    _needs(inst, objective=True, bifunction=True, theorem_id="hconvex-solves-minty")
    hyps = [
        _hyp_entry("h-convex",
                   check_h_convex(inst.objective, inst.bifunction, inst.sampler, tol, hconvex_form, max_pairs)),
    ]
    eff = solve_nvop(inst, tol, "efficient")
    mn = solve_mnvvip(inst, tol)
    holds, witness = _solution_subset(eff, mn)
    weak = solve_nvop(inst, tol, "weak")
    weak_holds, _ = _solution_subset(weak, mn)
    notes = [
        f"h-convexity checked in the {hconvex_form!r} form",
        f"stated weak-efficient inclusion (weak nvop within mnvvip) on this grid: {weak_holds}",
    ]
    return _report("hconvex-solves-minty",
                   "every efficient nvop point on the grid solves mnvvip",
                   hyps, holds, witness,
                   {"nvop_efficient": eff.describe(), "nvop_weak": weak.describe(), "mnvvip": mn.describe()},
                   notes)


def _thm_pseudoconvex_efficient_solves_minty(inst, tol, hconvex_form, max_pairs):
    _needs(inst, objective=True, bifunction=True, theorem_id="pseudoconvex-efficient-solves-minty")
    phi, h, sampler = inst.objective, inst.bifunction, inst.sampler
    hyps = [
        _hyp_entry("h-pseudoconvex", check_h_pseudoconvex(phi, h, sampler, tol, max_pairs)),
        _hyp_entry("dini-envelope-upper",
                   check_dini_envelope(phi, h, sampler, inst.sched, tol, "upper", max_pairs)),
        _hyp_entry("reversal-homogeneity", check_reversal_homogeneity(h, sampler, tol)),
    ]
    eff = solve_nvop(inst, tol, "efficient")
    mn = solve_mnvvip(inst, tol)
    holds, witness = _solution_subset(eff, mn)
    return _report("pseudoconvex-efficient-solves-minty",
                   "every efficient nvop point on the grid solves mnvvip",
                   hyps, holds, witness,
                   {"nvop_efficient": eff.describe(), "mnvvip": mn.describe()}, [])


THEOREMS: Dict[str, Callable] = {
    "minty-equivalence": _thm_minty_equivalence,
    "uniqueness": _thm_uniqueness,
    "quasiconvex-transfer": _thm_quasiconvex_transfer,
    "pseudoconvex-transfer": _thm_pseudoconvex_transfer,
    "efficient-solves-stampacchia": _thm_efficient_solves_stampacchia,
    "weak-efficient-solves-stampacchia": _thm_weak_efficient_solves_stampacchia,
    "hconvex-solves-minty": _thm_hconvex_solves_minty,
    "pseudoconvex-efficient-solves-minty": _thm_pseudoconvex_efficient_solves_minty,
}
