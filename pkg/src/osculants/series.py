"""Truncated complex power series and sparse hypersurfaces through the origin.

Series arithmetic is mod ``t**m``.  Composition of a hypersurface with a
parametrization is done monomial by monomial from cached coordinate powers,
optionally carrying forward-mode tangents so that residuals and Jacobians
come from one code path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np


@lru_cache(maxsize=64)
def _toeplitz_index(m: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.subtract.outer(np.arange(m), np.arange(m))
    return np.clip(idx, 0, None), idx >= 0


def cauchy_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Truncated Cauchy product along the last axis, broadcasting the rest.

    Both operands must share the last-axis length ``m``.
    """
    m = a.shape[-1]
    if b.shape[-1] != m:
        raise ValueError(f"order mismatch {m} vs {b.shape[-1]}")
    if a.ndim == 1 and b.ndim == 1:
        return np.convolve(a, b)[:m]
    return np.einsum("...kl,...l->...k", lower_toeplitz(a), b)


def lower_toeplitz(a: np.ndarray) -> np.ndarray:
    """Multiplication-by-``a`` matrices mod ``t**m``: ``L[..., k, l] = a[..., k - l]``."""
    idx, mask = _toeplitz_index(a.shape[-1])
    return np.where(mask, a[..., idx], 0)


@dataclass(frozen=True)
class TruncatedSeries:
    """Complex series ``c_0 + c_1 t + ... + c_{m-1} t**(m-1)`` mod ``t**m``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size < 1:
            raise ValueError("series order must be positive")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, order: int) -> "TruncatedSeries":
        return cls(np.zeros(order, dtype=complex))

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        c = np.zeros(order, dtype=complex)
        c[0] = 1.0
        return cls(c)

    @classmethod
    def from_poly(cls, coeffs: Sequence[complex], order: int) -> "TruncatedSeries":
        """Truncate or zero-pad ascending polynomial coefficients to ``order``."""
        c = np.zeros(order, dtype=complex)
        src = np.asarray(coeffs, dtype=complex)[:order]
        c[: src.size] = src
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.size

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot raise the order of a truncated series")
        return TruncatedSeries(self.coeffs[:order])

    def valuation(self, tol: float = 0.0) -> int:
        """Index of the first coefficient with modulus above ``tol`` (order if none)."""
        nz = np.nonzero(np.abs(self.coeffs) > tol)[0]
        return int(nz[0]) if nz.size else self.order

    def _pair(self, other: "TruncatedSeries") -> tuple[np.ndarray, np.ndarray]:
        m = min(self.order, other.order)
        return self.coeffs[:m], other.coeffs[:m]

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self + TruncatedSeries.one(self.order) * other
        a, b = self._pair(other)
        return TruncatedSeries(a + b)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            a, b = self._pair(other)
            return TruncatedSeries(cauchy_mul(a, b))
        return TruncatedSeries(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return series_pow(self, e)

    def __call__(self, t):
        """Evaluate the truncated polynomial at ``t`` (scalar or array)."""
        return np.polyval(self.coeffs[::-1], t)

    def allclose(self, other: "TruncatedSeries", atol: float = 1e-12) -> bool:
        a, b = self._pair(other)
        return bool(np.allclose(a, b, rtol=0, atol=atol))

    def __repr__(self):
        return f"TruncatedSeries({np.array2string(self.coeffs, precision=6)})"


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def series_scale(a: TruncatedSeries, s: complex) -> TruncatedSeries:
    return TruncatedSeries(a.coeffs * complex(s))


def series_pow(a: TruncatedSeries, e: int) -> TruncatedSeries:
    """``a**e`` mod ``t**m`` by repeated squaring; ``e == 0`` gives 1."""
    if e < 0:
        raise ValueError("negative powers are not supported")
    result = TruncatedSeries.one(a.order)
    base = a
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


# ---------------------------------------------------------------------------
# hypersurfaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SparseHypersurface:
    """``f = sum_I c_I x**I`` with no constant term and no stored zeros."""

    n: int
    terms: Mapping[tuple[int, ...], complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be positive")
        clean: dict[tuple[int, ...], complex] = {}
        for exp, c in dict(self.terms).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.n:
                raise ValueError(f"exponent {exp} has wrong length for n={self.n}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            if not any(exp):
                raise ValueError("hypersurface must pass through the origin (constant term present)")
            c = complex(c)
            if c != 0:
                clean[exp] = clean.get(exp, 0j) + c
        clean = {e: c for e, c in clean.items() if c != 0}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @property
    def support(self) -> list[tuple[int, ...]]:
        return list(self.terms)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        exps = np.array(self.support, dtype=np.int64).reshape(-1, self.n)
        coeffs = np.array(list(self.terms.values()), dtype=complex)
        return exps, coeffs

    def coefficient(self, exp: Iterable[int]) -> complex:
        return self.terms.get(tuple(exp), 0j)

    def scaled(self, s: complex) -> "SparseHypersurface":
        return SparseHypersurface(self.n, {e: c * s for e, c in self.terms.items()})

    def conjugate(self) -> "SparseHypersurface":
        return SparseHypersurface(self.n, {e: complex(c).conjugate() for e, c in self.terms.items()})

    def is_real(self) -> bool:
        return all(complex(c).imag == 0 for c in self.terms.values())

    def __add__(self, other: "SparseHypersurface") -> "SparseHypersurface":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0j) + c
        return SparseHypersurface(self.n, terms)

    def __call__(self, x: Sequence) -> complex:
        """Evaluate at a point (entries may be arrays)."""
        return sum(c * np.prod([xi**e for xi, e in zip(x, exp)], axis=0) for exp, c in self.terms.items())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [
                {"exp": list(e), "re": complex(c).real, "im": complex(c).imag}
                for e, c in self.terms.items()
            ],
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "SparseHypersurface":
        try:
            n = int(doc["n"])
            terms = {}
            for t in doc["terms"]:
                exp = tuple(int(e) for e in t["exp"])
                c = complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
                terms[exp] = terms.get(exp, 0j) + c
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed hypersurface document: {exc}") from exc
        return cls(n, terms)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "SparseHypersurface":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed hypersurface JSON: {exc}") from exc
        return cls.from_dict(doc)

    @classmethod
    def load(cls, path) -> "SparseHypersurface":
        with open(path) as fh:
            return cls.from_json(fh.read())


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def _power_table(x: np.ndarray, dx: np.ndarray | None, top: int):
    """Powers ``x**e`` for ``e = 0..top`` with forward-mode tangents."""
    m = x.shape[-1]
    vals = np.zeros((top + 1, m), dtype=complex)
    vals[0, 0] = 1.0
    for e in range(1, top + 1):
        vals[e] = np.convolve(vals[e - 1], x)[:m]
    if dx is None:
        return vals, None
    # power rule: d(x^e) = e x^(e-1) dx
    tans = np.zeros((top + 1,) + dx.shape, dtype=complex)
    if top >= 1:
        e = np.arange(1, top + 1)[:, None, None]
        tans[1:] = e * np.einsum("ekl,pl->epk", lower_toeplitz(vals[:-1]), dx)
    return vals, tans


def monomial_series(
    exps: np.ndarray,
    x: Sequence[np.ndarray],
    dx: Sequence[np.ndarray] | None = None,
    skip_high: bool = True,
):
    """Series of each monomial ``x(t)**I`` (rows of ``exps``) mod ``t**m``.

    ``x`` holds the coordinate series (each of length ``m``); ``dx`` optional
    tangents of shape ``(p, m)`` per coordinate.  Returns ``(vals, tans)``
    with shapes ``(T, m)`` and ``(T, p, m)`` (``tans`` is None without
    ``dx``).  With ``skip_high`` monomials of total degree ``>= m`` are left
    as zero without being multiplied out.
    """
    exps = np.asarray(exps, dtype=np.int64).reshape(len(exps), len(x))
    T, n = exps.shape
    m = x[0].shape[-1]
    with_tan = dx is not None
    p = dx[0].shape[0] if with_tan else 0
    vals = np.zeros((T, m), dtype=complex)
    tans = np.zeros((T, p, m), dtype=complex) if with_tan else None
    if T == 0:
        return vals, tans
    live = exps.sum(axis=1) < m if skip_high else np.ones(T, dtype=bool)
    if not live.any():
        return vals, tans
    E = exps[live]
    v = t = None
    for i in range(n):
        top = int(E[:, i].max())
        pv, pt = _power_table(np.asarray(x[i], dtype=complex), None if not with_tan else np.asarray(dx[i], dtype=complex), top)
        gv = pv[E[:, i]]
        if v is None:
            v = gv
            t = pt[E[:, i]] if with_tan else None
            continue
        if with_tan:
            gt = pt[E[:, i]]
            t = cauchy_mul(v[:, None, :], gt) + cauchy_mul(gv[:, None, :], t)
        v = cauchy_mul(v, gv)
    vals[live] = v
    if with_tan:
        tans[live] = t
    return vals, tans


def compose_hypersurface(
    f: SparseHypersurface, x: Sequence[TruncatedSeries], skip_high: bool = True
) -> TruncatedSeries:
    """``f(x(t))`` mod ``t**m`` for coordinate series with zero constant term."""
    if len(x) != f.n:
        raise ValueError(f"expected {f.n} coordinate series, got {len(x)}")
    orders = {xi.order for xi in x}
    if len(orders) != 1:
        raise ValueError(f"coordinate series must share one order, got {sorted(orders)}")
    for i, xi in enumerate(x):
        if xi.coeffs[0] != 0:
            raise ValueError(f"coordinate {i + 1} has nonzero constant term; x(0) must be 0")
    m = orders.pop()
    exps, coeffs = f.arrays()
    vals, _ = monomial_series(exps, [xi.coeffs for xi in x], skip_high=skip_high)
    return TruncatedSeries(coeffs @ vals if len(coeffs) else np.zeros(m, dtype=complex))
