"""Domain sampling and check outcomes.

Universal claims ("for all p, q in S") are checked on a deterministic grid
plus seeded-uniform extra samples; a passing verdict is therefore always
``holds_on_samples``, never a proof.  Counterexamples carry a replayable
witness: the violating tuple plus everything needed to re-evaluate it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .manifolds import Manifold, Point, PositiveOrthant, Tangent, log_map

HOLDS = "holds_on_samples"
COUNTEREXAMPLE = "counterexample"


@dataclass(frozen=True)
class DomainSampler:
    """Grid plus seeded-random samples inside a chart box.

    ``spacing`` is "linear" or "log"; log spacing needs positive bounds and
    matches the geodesically uniform grid on the positive orthant.
    """

    manifold: Manifold
    box: Tuple[Tuple[float, float], ...]
    grid_n: int = 9
    seed: int = 42
    extra_random: int = 0
    spacing: str = "linear"

    def __post_init__(self):
        if len(self.box) != self.manifold.n:
            raise ValueError("box must give one (lo, hi) pair per chart axis")
        for lo, hi in self.box:
            if not lo < hi:
                raise ValueError(f"empty box axis ({lo}, {hi})")
            if isinstance(self.manifold, PositiveOrthant) and lo <= 0:
                raise ValueError("positive orthant bounds must be strictly positive")
            if self.spacing == "log" and lo <= 0:
                raise ValueError("log spacing needs positive bounds")
        if self.grid_n < 2:
            raise ValueError("grid_n must be >= 2")
        if self.extra_random < 0:
            raise ValueError("extra_random must be >= 0")
        if self.spacing not in ("linear", "log"):
            raise ValueError("spacing must be 'linear' or 'log'")

    def axes(self) -> List[np.ndarray]:
        out = []
        for lo, hi in self.box:
            if self.spacing == "log":
                out.append(np.geomspace(lo, hi, self.grid_n))
            else:
                out.append(np.linspace(lo, hi, self.grid_n))
        return out

    def points(self) -> List[Point]:
        pts = [Point(self.manifold, combo) for combo in itertools.product(*self.axes())]
        if self.extra_random:
            rng = np.random.default_rng(self.seed)
            for _ in range(self.extra_random):
                coords = []
                for lo, hi in self.box:
                    if self.spacing == "log":
                        coords.append(float(np.exp(rng.uniform(np.log(lo), np.log(hi)))))
                    else:
                        coords.append(float(rng.uniform(lo, hi)))
                pts.append(Point(self.manifold, tuple(coords)))
        return pts

    def pair_rng(self, *salt: int) -> np.random.Generator:
        """Deterministic per-tuple random stream, independent of loop order."""
        return np.random.default_rng((self.seed,) + salt)

    def describe(self) -> dict:
        return {
            "manifold": self.manifold.describe(),
            "box": [list(b) for b in self.box],
            "grid_n": self.grid_n,
            "seed": self.seed,
            "extra_random": self.extra_random,
            "spacing": self.spacing,
        }


def iter_pairs(points: List[Point], ordered: bool) -> Iterator[Tuple[int, int]]:
    n = len(points)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if not ordered and j < i:
                continue
            yield i, j


def select_pairs(points: List[Point], ordered: bool, max_pairs: Optional[int] = None) -> List[Tuple[int, int]]:
    """Deterministic pair list, strided down to at most ``max_pairs``."""
    pairs = list(iter_pairs(points, ordered))
    if max_pairs is not None and len(pairs) > max_pairs:
        idx = np.unique(np.linspace(0, len(pairs) - 1, max_pairs).astype(int))
        pairs = [pairs[k] for k in idx]
    return pairs


def sample_tangents(sampler: DomainSampler, points: List[Point], per_point: int = 4) -> List[Tuple[int, Tangent]]:
    """Deterministic tangent samples at each sampled point.

    Mixes log-map images of neighbouring sample points with seeded-uniform
    chart components scaled to the box widths.
    """
    spans = [hi - lo for lo, hi in sampler.box]
    out: List[Tuple[int, Tangent]] = []
    n = len(points)
    for i, p in enumerate(points):
        rng = sampler.pair_rng(101, i)
        taken = 0
        for step in (1, 2):
            j = (i + step) % n
            if j != i and taken < per_point:
                out.append((i, log_map(p, points[j])))
                taken += 1
        while taken < per_point:
            comps = tuple(float(rng.uniform(-s, s)) for s in spans)
            if all(c == 0.0 for c in comps):
                comps = tuple(0.5 * s for s in spans)
            out.append((i, Tangent(p, comps)))
            taken += 1
    return out


@dataclass
class Witness:
    """Replayable record of a violating sample tuple."""

    check: str
    context: dict
    data: dict
    margin: float

    def describe(self) -> dict:
        return {
            "check": self.check,
            "context": self.context,
            "data": self.data,
            "margin": self.margin,
        }


@dataclass
class CheckOutcome:
    verdict: str
    samples_checked: int
    witness: Optional[Witness] = None
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def describe(self) -> dict:
        out = {
            "verdict": self.verdict,
            "samples_checked": self.samples_checked,
            "witness": self.witness.describe() if self.witness else None,
        }
        if self.note:
            out["note"] = self.note
        return out


def hold_outcome(samples: int, note: str = "") -> CheckOutcome:
    return CheckOutcome(HOLDS, samples, None, note)


def fail_outcome(samples: int, witness: Witness, note: str = "") -> CheckOutcome:
    return CheckOutcome(COUNTEREXAMPLE, samples, witness, note)
