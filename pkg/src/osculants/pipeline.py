"""End-to-end runs: start set -> tracking -> osculant records, and batches of them."""

from __future__ import annotations

import datetime as _dt
import logging
from dataclasses import dataclass, field
from itertools import product as _iproduct

import numpy as np

from . import __version__
from .combinatorics import Multidegree, count_primitive, necklace_to_string
from .osculants import (
    DegenerateNormalization,
    Histogram,
    OsculantRecord,
    collisions,
    conjugation_pairing,
    dedupe,
    make_record,
    settle_near_real,
    tally_experiment,
)
from .series import SparseHypersurface
from .start import StartSet, build_start_set
from .tracker import PathResult, TrackerConfig, make_problem, track_all

log = logging.getLogger(__name__)


def dense_support(d) -> list[tuple[int, ...]]:
    """Every nonzero exponent of total degree below ``|d|``."""
    d = Multidegree.parse(d)
    m = d.total
    return [e for e in _iproduct(range(m), repeat=d.n) if 0 < sum(e) < m]


def random_target(d, rng: np.random.Generator) -> SparseHypersurface:
    """Uniform [-1, 1] coefficients on the dense support, linear part nonzero."""
    d = Multidegree.parse(d)
    support = dense_support(d)
    while True:
        c = rng.uniform(-1.0, 1.0, size=len(support))
        linear = [ci for e, ci in zip(support, c) if sum(e) == 1]
        if any(abs(x) > 1e-3 for x in linear):
            break
    return SparseHypersurface(d.n, dict(zip(support, c)))


def manifest(d, source: dict, cfg: TrackerConfig) -> dict:
    d = Multidegree.parse(d)
    return {
        "multidegree": list(d.d),
        "target": source,
        "tracker": cfg.to_dict(),
        "gamma": [cfg.gamma.real, cfg.gamma.imag],
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "version": __version__,
    }


@dataclass
class Solution:
    d: Multidegree
    target: SparseHypersurface
    paths: list[PathResult]
    records: list[OsculantRecord]
    osculants: list[OsculantRecord]
    collisions: list[list[int]]
    degenerate: list[int] = field(default_factory=list)

    @property
    def failures(self) -> list[PathResult]:
        return [p for p in self.paths if not p.converged]

    @property
    def n_real(self) -> int:
        return sum(r.is_real for r in self.osculants)

    @property
    def complete(self) -> bool:
        """Every path converged and the endpoints gave the expected number of distinct osculants."""
        return (
            not self.failures
            and not self.degenerate
            and not self.collisions
            and len(self.osculants) == count_primitive(self.d)
        )

    def summary(self) -> str:
        n = len(self.osculants)
        word = "osculant" if n == 1 else "osculants"
        return f"{n} {word}, {self.n_real} real"

    def to_dict(self) -> dict:
        return {
            "summary": self.summary(),
            "osculants": [r.to_dict() for r in self.osculants],
            "paths": [p.to_dict() for p in self.paths],
            "collisions": self.collisions,
            "failures": [necklace_to_string(p.source) for p in self.failures if p.source],
        }


def solve(
    target: SparseHypersurface,
    d,
    cfg: TrackerConfig = TrackerConfig(),
    start_set: StartSet | None = None,
    workers: int = 1,
) -> Solution:
    d = Multidegree.parse(d)
    if target.n != d.n:
        raise ValueError(f"target has n={target.n} but degree {d.d} has {d.n} entries")
    ss = start_set if start_set is not None else build_start_set(d)
    hp = make_problem(target, d, cfg.gamma)
    paths = track_all(hp, ss, cfg, workers=workers)
    records, degenerate = [], []
    for i, pr in enumerate(paths):
        if not pr.converged:
            continue
        try:
            records.append(make_record(target, pr.endpoint, pr.source))
        except DegenerateNormalization:
            log.warning("degenerate a_11 at endpoint of %s", necklace_to_string(pr.source))
            degenerate.append(i)
    distinct = settle_near_real(dedupe(records), target, cfg.newton_tol)
    return Solution(d, target, paths, records, distinct, collisions(records), degenerate)


@dataclass
class TrialOutcome:
    index: int
    n_osculants: int
    n_real: int
    complete: bool
    parity_ok: bool
    failures: int


@dataclass
class ExperimentResult:
    d: Multidegree
    trials: list[TrialOutcome]
    histogram: Histogram

    @property
    def failed(self) -> list[TrialOutcome]:
        return [t for t in self.trials if not t.complete]

    @property
    def parity_anomalies(self) -> list[TrialOutcome]:
        return [t for t in self.trials if t.complete and not t.parity_ok]

    @property
    def real_counts(self) -> list[int]:
        return [t.n_real for t in self.trials if t.complete]

    def to_csv(self) -> str:
        lines = self.histogram.to_csv().rstrip("\n").split("\n")
        extra = [f"failed:{t.index}" for t in self.failed]
        if extra:
            lines.append(",," + ";".join(extra))
        return "\n".join(lines) + "\n"


def run_experiment(d, trials: int, seed: int, cfg: TrackerConfig = TrackerConfig()) -> ExperimentResult:
    """``trials`` random real targets from one seeded stream, tallied by real count."""
    d = Multidegree.parse(d)
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    ss = build_start_set(d)
    outcomes = []
    for i in range(trials):
        target = random_target(d, rng)
        sol = solve(target, d, cfg, start_set=ss)
        rep = conjugation_pairing(sol.osculants, d=d)
        outcomes.append(
            TrialOutcome(i, len(sol.osculants), sol.n_real, sol.complete, rep.parity_ok, len(sol.failures))
        )
    complete = [t for t in outcomes if t.complete]
    hist = tally_experiment([t.n_real for t in complete], d)
    return ExperimentResult(d, outcomes, hist)
