"""From tracked endpoints to distinct osculants: normalization, dedup, reality, tallies."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .combinatorics import Multidegree, Necklace, count_primitive, necklace_to_string
from .series import SparseHypersurface, TruncatedSeries, compose_hypersurface
from .system import AlphaPoint, expand_parametrization

DEGENERATE_TOL = 1e-8
REAL_TOL = 1e-6
DEDUP_TOL = 1e-6


class DegenerateNormalization(ValueError):
    """The linear coefficient of x_1 vanishes, so ``a_11 = 1`` cannot be imposed."""

    def __init__(self, form: "CoefficientForm"):
        super().__init__(f"degenerate normalization: |a_11| = {abs(form.a[0][0]):.3e}")
        self.form = form


@dataclass(frozen=True)
class CoefficientForm:
    """``x_i(t) = sum_j a[i][j-1] t**j``."""

    d: Multidegree
    a: tuple[np.ndarray, ...]
    normalized: bool = False

    def __post_init__(self):
        d = Multidegree.parse(self.d)
        a = tuple(np.array(g, dtype=complex).reshape(-1) for g in self.a)
        if len(a) != d.n or any(g.size != di for g, di in zip(a, d.d)):
            raise ValueError("coefficient shape does not match multidegree")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "a", a)

    @property
    def flat(self) -> np.ndarray:
        return np.concatenate(self.a)

    def series(self, order: int) -> list[TruncatedSeries]:
        return [TruncatedSeries.from_poly(np.concatenate([[0], g]), order) for g in self.a]

    def __call__(self, t) -> np.ndarray:
        """Points ``(x_1(t), ..., x_n(t))``; rows follow ``t``."""
        t = np.asarray(t)
        cols = [np.polyval(np.concatenate([g[::-1], [0]]), t) for g in self.a]
        return np.stack(cols, axis=-1)

    def reparametrized(self, beta: complex) -> "CoefficientForm":
        """Coefficients of ``x(beta t)``."""
        return CoefficientForm(
            self.d, tuple(g * beta ** np.arange(1, g.size + 1) for g in self.a), self.normalized
        )

    def conjugate(self) -> "CoefficientForm":
        return CoefficientForm(self.d, tuple(np.conj(g) for g in self.a), self.normalized)

    def pairs(self) -> list[list[float]]:
        return [[float(z.real), float(z.imag)] for z in self.flat]


def raw_coefficient_form(p: AlphaPoint) -> CoefficientForm:
    xs = expand_parametrization(p, max(p.d.d) + 1)
    return CoefficientForm(p.d, tuple(x.coeffs[1 : di + 1] for x, di in zip(xs, p.d.d)))


def to_coefficient_form(p: AlphaPoint, degenerate_tol: float = DEGENERATE_TOL) -> CoefficientForm:
    """Expand the roots into coefficients and rescale ``t`` so that ``a_11 = 1``."""
    raw = raw_coefficient_form(p)
    return normalize(raw, degenerate_tol)


def normalize(cf: CoefficientForm, degenerate_tol: float = DEGENERATE_TOL) -> CoefficientForm:
    a11 = cf.a[0][0]
    if abs(a11) <= degenerate_tol:
        raise DegenerateNormalization(cf)
    out = cf.reparametrized(1.0 / a11)
    a = list(out.a)
    first = a[0].copy()
    first[0] = 1.0
    a[0] = first
    return CoefficientForm(cf.d, tuple(a), normalized=True)


def _scale(v: np.ndarray) -> np.ndarray:
    # entrywise tolerance scale; normalized coefficients can be huge when a_11 is small
    return np.maximum(1.0, np.abs(v))


def coefficients_close(u: np.ndarray, v: np.ndarray, tol: float) -> bool:
    return u.shape == v.shape and bool(np.all(np.abs(u - v) <= tol * np.maximum(_scale(u), _scale(v))))


def is_real_osculant(cf: CoefficientForm, tol: float = REAL_TOL) -> bool:
    """Every normalized coefficient has ``|Im a| <= tol * max(1, |a|)``."""
    if not cf.normalized:
        raise ValueError("reality is only meaningful for a_11-normalized forms")
    v = cf.flat
    return bool(np.all(np.abs(v.imag) <= tol * _scale(v)))


def form_residual(f: SparseHypersurface, cf: CoefficientForm) -> float:
    """Max |coefficient of t^k| of ``f(x(t))`` for ``k < |d|``."""
    m = cf.d.total
    return float(np.max(np.abs(compose_hypersurface(f, cf.series(m)).coeffs)))


def coefficient_residual(f: SparseHypersurface, cf: CoefficientForm) -> float:
    """Residual of a form mapped back to the ``prod(alpha) = 1`` convention.

    The normalized form belongs to ``x(t / a_11)``; rescaling by any
    ``beta`` with ``beta**|d| = prod`` of the leading coefficients recovers a
    root-coordinate representative.  The t^k coefficients only pick up a
    factor ``beta**k``, so this is the normalized residual rescaled.
    """
    lead = np.prod([g[-1] for g in cf.a])
    beta = complex(lead) ** (-1.0 / cf.d.total) if lead != 0 else 1.0
    return form_residual(f, cf.reparametrized(beta))


@dataclass(frozen=True)
class OsculantRecord:
    form: CoefficientForm
    is_real: bool
    residual: float
    source_necklace: Necklace | None

    def to_dict(self) -> dict:
        return {
            "necklace": necklace_to_string(self.source_necklace) if self.source_necklace else None,
            "coefficients": self.form.pairs(),
            "is_real": self.is_real,
            "residual": self.residual,
        }

    @classmethod
    def from_dict(cls, doc: dict, d) -> "OsculantRecord":
        from .combinatorics import necklace_from_string

        d = Multidegree.parse(d)
        flat = np.array([complex(re, im) for re, im in doc["coefficients"]])
        cuts = np.cumsum((0,) + d.d)
        form = CoefficientForm(d, tuple(flat[cuts[i] : cuts[i + 1]] for i in range(d.n)), True)
        nk = necklace_from_string(doc["necklace"], d.n) if doc.get("necklace") else None
        return cls(form, bool(doc["is_real"]), float(doc["residual"]), nk)


def make_record(
    f: SparseHypersurface, p: AlphaPoint, source: Necklace | None = None, real_tol: float = REAL_TOL
) -> OsculantRecord:
    cf = to_coefficient_form(p)
    return OsculantRecord(cf, is_real_osculant(cf, real_tol), coefficient_residual(f, cf), source)


def group_records(records: list[OsculantRecord], tol: float = DEDUP_TOL) -> list[list[int]]:
    """Indices grouped by entrywise agreement of normalized coefficients."""
    groups: list[list[int]] = []
    reps: list[np.ndarray] = []
    for i, r in enumerate(records):
        if not r.form.normalized:
            raise ValueError("dedupe expects normalized forms")
        v = r.form.flat
        for g, rep in zip(groups, reps):
            if coefficients_close(rep, v, tol):
                g.append(i)
                break
        else:
            groups.append([i])
            reps.append(v)
    return groups


def dedupe(records: list[OsculantRecord], tol: float = DEDUP_TOL) -> list[OsculantRecord]:
    """One representative per group of coinciding osculants."""
    return [records[g[0]] for g in group_records(records, tol)]


def collisions(records: list[OsculantRecord], tol: float = DEDUP_TOL) -> list[list[int]]:
    return [g for g in group_records(records, tol) if len(g) > 1]


def real_projection(cf: CoefficientForm) -> CoefficientForm:
    return CoefficientForm(cf.d, tuple(g.real.astype(complex) for g in cf.a), cf.normalized)


def settle_near_real(
    records: list[OsculantRecord], f: SparseHypersurface, residual_tol: float, tol: float = REAL_TOL
) -> list[OsculantRecord]:
    """Replace ill-conditioned real osculants by their real projection.

    For a real target a non-real osculant must have a conjugate partner.  An
    unpaired one whose real part still solves the system to ``residual_tol``
    is a real osculant whose imaginary noise exceeds ``tol``; complex ones
    lose many orders of residual under projection.
    """
    if not f.is_real():
        return list(records)
    out = list(records)
    for i, r in enumerate(records):
        if r.is_real:
            continue
        target = np.conj(r.form.flat)
        if any(j != i and coefficients_close(s.form.flat, target, tol) for j, s in enumerate(records)):
            continue
        proj = real_projection(r.form)
        res = coefficient_residual(f, proj)
        if res <= residual_tol:
            out[i] = OsculantRecord(proj, True, res, r.source_necklace)
    return out


@dataclass
class ConjugationReport:
    pairs: list[tuple[int, int]] = field(default_factory=list)
    real: list[int] = field(default_factory=list)
    anomalies: list[int] = field(default_factory=list)
    expected_total: int | None = None

    @property
    def n_real(self) -> int:
        return len(self.real)

    @property
    def parity_ok(self) -> bool:
        if self.expected_total is None:
            return not self.anomalies
        return not self.anomalies and (self.n_real - self.expected_total) % 2 == 0


def conjugation_pairing(
    records: list[OsculantRecord], tol: float = REAL_TOL, d=None
) -> ConjugationReport:
    """Match every non-real osculant with its entrywise complex conjugate."""
    report = ConjugationReport()
    if d is not None:
        report.expected_total = count_primitive(d)
    elif records:
        report.expected_total = count_primitive(records[0].form.d)
    unmatched = []
    for i, r in enumerate(records):
        if r.is_real:
            report.real.append(i)
        else:
            unmatched.append(i)
    used = set()
    for i in unmatched:
        if i in used:
            continue
        target = np.conj(records[i].form.flat)
        partner = None
        for j in unmatched:
            if j != i and j not in used and coefficients_close(records[j].form.flat, target, tol):
                partner = j
                break
        if partner is None:
            report.anomalies.append(i)
            used.add(i)
        else:
            report.pairs.append((i, partner))
            used.update((i, partner))
    return report


@dataclass
class Histogram:
    d: Multidegree
    rows: dict[int, int]
    anomalies: list[int]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "count", "anomalies"])
        for row in sorted(self.rows):
            w.writerow([row, self.rows[row], ""])
        if self.anomalies:
            w.writerow(["", "", ";".join(map(str, self.anomalies))])
        return buf.getvalue()


def tally_experiment(counts: list[int], d) -> Histogram:
    """Histogram keyed by ``(#real - (N mod 2)) / 2``; parity violators set aside."""
    d = Multidegree.parse(d)
    N = count_primitive(d)
    rows: Counter = Counter()
    bad = []
    for c in counts:
        if (c - N) % 2 or c < 0 or c > N:
            bad.append(c)
            continue
        rows[(c - N % 2) // 2] += 1
    return Histogram(d, dict(sorted(rows.items())), bad)


def sample_curve(cf: CoefficientForm, t_lo: float, t_hi: float, count: int) -> np.ndarray:
    """``count`` equally spaced samples of the curve, real-valued for real forms."""
    if count < 2:
        raise ValueError("need at least two samples")
    t = np.linspace(t_lo, t_hi, count)
    pts = cf(t)
    if np.all(np.abs(cf.flat.imag) <= REAL_TOL * _scale(cf.flat)):
        return pts.real
    return pts


def records_to_json(records: list[OsculantRecord], **kw) -> str:
    return json.dumps([r.to_dict() for r in records], **kw)
