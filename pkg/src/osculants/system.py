"""The square osculation system in root coordinates.

A point is ``alpha = (alpha_{i,j})`` with ``x_i(t) = prod_j (alpha_{i,j} t + 1) - 1``.
The residual is the vector of coefficients ``h_1..h_{|d|-1}`` of ``f(x(t))``
followed by ``prod(alpha) - 1`` (the chart ``z = 1``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as _iproduct

import numpy as np

from .combinatorics import Multidegree
from .series import SparseHypersurface, TruncatedSeries, cauchy_mul, monomial_series


@dataclass(frozen=True)
class AlphaPoint:
    d: Multidegree
    alpha: tuple[np.ndarray, ...]

    def __post_init__(self):
        d = Multidegree.parse(self.d)
        groups = tuple(np.array(g, dtype=complex).reshape(-1) for g in self.alpha)
        if len(groups) != d.n or any(g.size != di for g, di in zip(groups, d.d)):
            raise ValueError(f"alpha shape {[g.size for g in groups]} does not match d={d.d}")
        for g in groups:
            g.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "alpha", groups)

    @classmethod
    def from_flat(cls, d, flat) -> "AlphaPoint":
        d = Multidegree.parse(d)
        flat = np.asarray(flat, dtype=complex)
        cuts = np.cumsum((0,) + d.d)
        return cls(d, tuple(flat[cuts[i] : cuts[i + 1]] for i in range(d.n)))

    @property
    def flat(self) -> np.ndarray:
        return np.concatenate(self.alpha)

    def norm_defect(self) -> complex:
        return complex(np.prod(self.flat) - 1)

    def scaled(self, beta: complex) -> "AlphaPoint":
        return AlphaPoint(self.d, tuple(g * beta for g in self.alpha))

    def conjugate(self) -> "AlphaPoint":
        return AlphaPoint(self.d, tuple(np.conj(g) for g in self.alpha))

    def to_dict(self) -> list:
        return [[[float(z.real), float(z.imag)] for z in g] for g in self.alpha]

    @classmethod
    def from_dict(cls, d, groups) -> "AlphaPoint":
        return cls(d, tuple(np.array([complex(re, im) for re, im in g]) for g in groups))


@dataclass(frozen=True)
class Residual:
    h: np.ndarray
    norm_defect: complex

    @property
    def vector(self) -> np.ndarray:
        return np.append(self.h, self.norm_defect)

    @property
    def max_norm(self) -> float:
        return float(np.max(np.abs(self.vector)))


def tilde_hypersurface(n: int) -> SparseHypersurface:
    """Expansion of ``prod_i (x_i + 1) - 1``: every nonzero 0/1 exponent, coefficient 1."""
    if n < 1:
        raise ValueError("n must be positive")
    terms = {e: 1.0 for e in _iproduct((0, 1), repeat=n) if any(e)}
    return SparseHypersurface(n, terms)


def _coordinate_jets(d: Multidegree, flat: np.ndarray, m: int, with_tan: bool):
    """Coordinate series x_i mod t**m and their tangents w.r.t. the flat alpha vector."""
    p = d.total
    xs, dxs = [], []
    cuts = np.cumsum((0,) + d.d)
    one = np.ones(1, dtype=complex)
    for i in range(d.n):
        group = flat[cuts[i] : cuts[i + 1]]
        factors = [np.array([1.0, a], dtype=complex) for a in group]
        # prefix[j] = prod_{l < j}, suffix[j] = prod_{l >= j} of the linear factors
        prefix = [one]
        for fac in factors:
            prefix.append(np.convolve(prefix[-1], fac))
        x = np.zeros(m, dtype=complex)
        full = prefix[-1][:m]
        x[: full.size] = full
        x[0] -= 1.0
        xs.append(x)
        if not with_tan:
            continue
        suffix = [one]
        for fac in reversed(factors):
            suffix.append(np.convolve(suffix[-1], fac))
        suffix.reverse()
        dx = np.zeros((p, m), dtype=complex)
        for j in range(group.size):
            # d/d alpha_{i,j} of prod_l (alpha_{i,l} t + 1) = t * prod_{l != j}
            others = np.convolve(prefix[j], suffix[j + 1])[: m - 1]
            dx[cuts[i] + j, 1 : 1 + others.size] = others
        dxs.append(dx)
    return xs, (dxs if with_tan else None)


def expand_parametrization(p: AlphaPoint, order: int) -> list[TruncatedSeries]:
    """Each ``x_i(t)`` as a series mod ``t**order`` (zero constant term)."""
    if order < 1:
        raise ValueError("order must be positive")
    xs, _ = _coordinate_jets(p.d, p.flat, order, with_tan=False)
    return [TruncatedSeries(x) for x in xs]


def monomial_basis(exps: np.ndarray, d: Multidegree, flat: np.ndarray, with_jac: bool = True):
    """Monomial series of ``x(t)**I`` mod ``t**|d|`` and their alpha-tangents.

    The residual for any coefficient vector ``c`` over ``exps`` is then just
    ``c @ vals[:, 1:]`` (it is linear in ``c``), and its Jacobian
    ``c @ tans[:, :, 1:]`` transposed.
    """
    m = d.total
    xs, dxs = _coordinate_jets(d, flat, m, with_tan=with_jac)
    return monomial_series(exps, xs, dxs)


def _norm_row(flat: np.ndarray) -> np.ndarray:
    """Gradient of ``prod(alpha)``: products of all entries but one, without division."""
    before = np.concatenate(([1.0], np.cumprod(flat[:-1])))
    after = np.concatenate((np.cumprod(flat[::-1][:-1])[::-1], [1.0]))
    return before * after


def residual_and_jacobian(coeffs, vals, tans, flat):
    """Assemble the square residual vector and Jacobian from a monomial basis."""
    coeffs = np.asarray(coeffs, dtype=complex)
    r = np.empty(flat.size, dtype=complex)
    r[:-1] = coeffs @ vals[:, 1:]
    r[-1] = np.prod(flat) - 1.0
    if tans is None:
        return r, None
    J = np.empty((flat.size, flat.size), dtype=complex)
    J[:-1] = np.einsum("t,tpk->kp", coeffs, tans[:, :, 1:])
    J[-1] = _norm_row(flat)
    return r, J


def _check_dims(f: SparseHypersurface, p: AlphaPoint):
    if f.n != p.d.n:
        raise ValueError(f"hypersurface has n={f.n} but point has {p.d.n} coordinate groups")


def evaluate(f: SparseHypersurface, p: AlphaPoint) -> Residual:
    _check_dims(f, p)
    exps, coeffs = f.arrays()
    vals, _ = monomial_basis(exps, p.d, p.flat, with_jac=False)
    r, _ = residual_and_jacobian(coeffs, vals, None, p.flat)
    return Residual(r[:-1], complex(r[-1]))


def jacobian(f: SparseHypersurface, p: AlphaPoint) -> np.ndarray:
    """Square Jacobian, rows = residual entries, columns = flattened (i, j)."""
    _check_dims(f, p)
    exps, coeffs = f.arrays()
    vals, tans = monomial_basis(exps, p.d, p.flat, with_jac=True)
    _, J = residual_and_jacobian(coeffs, vals, tans, p.flat)
    return J


@dataclass(frozen=True)
class HomotopyProblem:
    """Straight-line homotopy from ``gamma * start`` to ``target`` in coefficient space."""

    target: SparseHypersurface
    start: SparseHypersurface
    gamma: complex
    d: Multidegree
    exps: np.ndarray = field(init=False, repr=False, compare=False)
    c_start: np.ndarray = field(init=False, repr=False, compare=False)
    c_target: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = Multidegree.parse(self.d)
        object.__setattr__(self, "d", d)
        if self.start.n != self.target.n:
            raise ValueError("start and target dimensions differ")
        if self.target.n != d.n:
            raise ValueError(f"target dimension {self.target.n} does not match multidegree {d.d}")
        if self.gamma == 0:
            raise ValueError("gamma must be nonzero")
        support = sorted(set(self.start.support) | set(self.target.support))
        exps = np.array(support, dtype=np.int64).reshape(-1, d.n)
        cs = np.array([self.start.coefficient(e) for e in support], dtype=complex)
        ct = np.array([self.target.coefficient(e) for e in support], dtype=complex)
        object.__setattr__(self, "exps", exps)
        object.__setattr__(self, "c_start", cs)
        object.__setattr__(self, "c_target", ct)

    def coeff_vector(self, s: float) -> np.ndarray:
        if s == 1:
            return self.c_target
        return (1 - s) * self.gamma * self.c_start + s * self.c_target

    @property
    def coeff_velocity(self) -> np.ndarray:
        """d/ds of the coefficient vector."""
        return self.c_target - self.gamma * self.c_start


def homotopy_coeffs(hp: HomotopyProblem, s: float) -> SparseHypersurface:
    if not 0 <= s <= 1:
        raise ValueError("s must lie in [0, 1]")
    if s == 1:
        return hp.target
    c = hp.coeff_vector(s)
    return SparseHypersurface(hp.d.n, {tuple(e): ci for e, ci in zip(hp.exps.tolist(), c)})
