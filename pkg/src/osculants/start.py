"""Exact start solutions for ``prod_i (x_i + 1) - 1`` indexed by primitive necklaces.

A bead at position ``b`` of a word of length ``N`` sits at the root of -1
``zeta_b = exp(i pi (2b + 1) / N)``; a bead of color ``i`` contributes the
factor ``(alpha t + 1)`` with ``alpha = -1 / zeta_b`` to ``x_i(t) + 1``.  The
product over all beads is then ``1 + t**N``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .combinatorics import (
    Multidegree,
    Necklace,
    all_words,
    count_primitive,
    divisors,
    enumerate_necklaces,
    necklace_from_string,
    necklace_to_string,
)
from .series import TruncatedSeries, cauchy_mul
from .system import AlphaPoint, evaluate, jacobian, tilde_hypersurface

START_TOL = 1e-12


class StartSystemError(RuntimeError):
    """A constructed start point failed verification (an implementation bug)."""

    def __init__(self, message: str, necklace: Necklace | None = None):
        super().__init__(message)
        self.necklace = necklace


def roots_of_minus_one(N: int) -> np.ndarray:
    if N < 1:
        raise ValueError("N must be positive")
    b = np.arange(N)
    return np.exp(1j * np.pi * (2 * b + 1) / N)


def alpha_from_word(word: Sequence[int], d) -> AlphaPoint:
    """Root-coordinate point of an arbitrary (not necessarily canonical) word."""
    d = Multidegree.parse(d)
    word = list(word)
    alpha = -1.0 / roots_of_minus_one(len(word))
    groups = tuple(alpha[[b for b, c in enumerate(word) if c == i]] for i in range(1, d.n + 1))
    return AlphaPoint(d, groups)


def start_point(nk: Necklace) -> AlphaPoint:
    if not nk.is_primitive():
        raise ValueError(f"necklace {necklace_to_string(nk)} is not primitive")
    return alpha_from_word(nk.word, nk.content)


def product_series(p: AlphaPoint, order: int | None = None) -> TruncatedSeries:
    """``prod_{i,j} (alpha_{i,j} t + 1)`` as a series of order ``|d| + 1``."""
    m = p.d.total + 1 if order is None else order
    acc = np.zeros(m, dtype=complex)
    acc[0] = 1.0
    for a in p.flat:
        fac = np.zeros(m, dtype=complex)
        fac[0] = 1.0
        fac[1] = a
        acc = cauchy_mul(acc, fac)
    return TruncatedSeries(acc)


def special_fibre_defect(p: AlphaPoint) -> float:
    """Max deviation of ``prod(alpha t + 1)`` from ``1 + t**|d|``."""
    target = np.zeros(p.d.total + 1, dtype=complex)
    target[0] = target[-1] = 1.0
    return float(np.max(np.abs(product_series(p).coeffs - target)))


@dataclass(frozen=True)
class StartSet:
    d: Multidegree
    points: tuple[tuple[Necklace, AlphaPoint], ...]

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def to_dict(self) -> dict:
        return {
            "degree": list(self.d.d),
            "points": [
                {"necklace": necklace_to_string(nk), "alpha": p.to_dict()} for nk, p in self.points
            ],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc: dict) -> "StartSet":
        d = Multidegree.parse(doc["degree"])
        pts = tuple(
            (necklace_from_string(e["necklace"], d.n), AlphaPoint.from_dict(d, e["alpha"]))
            for e in doc["points"]
        )
        return cls(d, pts)


def build_start_set(d, verify: bool = True, tol: float = START_TOL) -> StartSet:
    """One verified start point per primitive ``d``-necklace."""
    d = Multidegree.parse(d)
    f = tilde_hypersurface(d.n)
    points = []
    for nk in enumerate_necklaces(d, primitive_only=True):
        p = start_point(nk)
        if verify:
            res = evaluate(f, p).max_norm
            if res > tol:
                raise StartSystemError(
                    f"start point of {necklace_to_string(nk)} has residual {res:.3e}", nk
                )
            if d.total > 1:
                cond = np.linalg.cond(jacobian(f, p))
                if not np.isfinite(cond) or cond > 1e12:
                    raise StartSystemError(
                        f"start point of {necklace_to_string(nk)} has singular Jacobian (cond={cond:.3e})",
                        nk,
                    )
        points.append((nk, p))
    expected = count_primitive(d)
    if len(points) != expected:
        raise StartSystemError(f"built {len(points)} start points, expected {expected}")
    return StartSet(d, tuple(points))


def parametrization_key(p: AlphaPoint, digits: int = 8) -> tuple:
    """Hashable key identifying a point up to within-color permutation."""
    def rnd(z):
        return (round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0)

    return tuple(tuple(sorted(rnd(z) for z in g)) for g in p.alpha)


@dataclass(frozen=True)
class OrbitReport:
    d: Multidegree
    n_parametrizations: int
    orbit_sizes: dict[int, int]  # orbit size -> number of orbits
    expected: dict[int, int]  # orbit size -> count_primitive(d / k)
    max_defect: float

    @property
    def ok(self) -> bool:
        return self.orbit_sizes == self.expected and self.max_defect <= START_TOL


def orbit_representatives_check(d) -> OrbitReport:
    """Census of all color-respecting root assignments grouped by ``t -> omega t``.

    Works purely on the numbers: every word of content ``d`` is turned into a
    point, the cyclic group of ``|d|``-th roots of unity acts by scaling, and
    orbits are read off from the permutation-invariant keys.
    """
    d = Multidegree.parse(d)
    N = d.total
    words = all_words(d) + 1
    points = [alpha_from_word(w.tolist(), d) for w in words]
    max_defect = max(special_fibre_defect(p) for p in points)
    keys = [parametrization_key(p) for p in points]
    index = {k: i for i, k in enumerate(keys)}
    if len(index) != len(points):
        raise StartSystemError("distinct assignments produced coinciding parametrizations")
    omega = np.exp(2j * np.pi / N)
    seen = [False] * len(points)
    sizes: Counter = Counter()
    for i, p in enumerate(points):
        if seen[i]:
            continue
        orbit = set()
        for r in range(N):
            k = parametrization_key(p.scaled(omega**r))
            j = index.get(k)
            if j is None:
                raise StartSystemError("root-of-unity scaling left the solution set")
            orbit.add(j)
        for j in orbit:
            seen[j] = True
        sizes[len(orbit)] += 1
    expected = {N // k: count_primitive(d.divided(k)) for k in divisors(d.gcd)}
    expected = {s: c for s, c in expected.items() if c}
    return OrbitReport(d, len(points), dict(sizes), expected, max_defect)


def rotate_word(word: Sequence[int], r: int) -> tuple[int, ...]:
    """Rotate right by ``r``: the bead at position ``b`` moves to ``b + r``."""
    w = tuple(word)
    r %= len(w)
    return w[len(w) - r :] + w[: len(w) - r]


def reparametrization_factor(N: int) -> complex:
    """Scaling of alpha induced by rotating a word one step to the right."""
    return complex(np.exp(-2j * np.pi / N))

