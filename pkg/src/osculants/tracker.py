"""Predictor-corrector tracking of the coefficient homotopy.

Paths start at the necklace points of ``gamma * tilde`` (``s = 0``) and
follow the square system as the coefficients move linearly to the target
(``s = 1``).
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Callable, Sequence

import numpy as np

from .combinatorics import Necklace, necklace_to_string
from .series import SparseHypersurface
from .start import StartSet
from .system import AlphaPoint, HomotopyProblem, monomial_basis, residual_and_jacobian, tilde_hypersurface

log = logging.getLogger(__name__)

CONVERGED = "converged"
STEP_UNDERFLOW = "step_underflow"
DIVERGED = "diverged"
MAX_STEPS = "max_steps_exceeded"
STATUSES = (CONVERGED, STEP_UNDERFLOW, DIVERGED, MAX_STEPS)

DIVERGENCE_BOUND = 1e8


@dataclass(frozen=True)
class TrackerConfig:
    initial_step: float = 0.05
    min_step: float = 1e-7
    max_step: float = 0.1
    newton_tol: float = 1e-10
    max_newton_iters: int = 5
    max_steps: int = 10000
    gamma_seed: int = 0
    endpoint_refine_iters: int = 20
    predictor: str = "rk4"
    # relative Newton-update size accepted by the corrector along the path
    path_tol: float = 1e-9
    # largest relative first correction; bigger ones mean the predictor left the basin
    max_correction: float = 1e-3
    # per-path target weight evening out the speed at both ends of the path
    balance: bool = True

    def __post_init__(self):
        if not 0 < self.min_step <= self.initial_step <= self.max_step < 1:
            raise ValueError("need 0 < min_step <= initial_step <= max_step < 1")
        if self.newton_tol <= 0 or self.path_tol <= 0 or self.max_correction <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_newton_iters < 1 or self.max_steps < 1:
            raise ValueError("iteration caps must be positive")
        if self.predictor not in ("euler", "rk4"):
            raise ValueError(f"unknown predictor {self.predictor!r}")

    @property
    def gamma(self) -> complex:
        """Unit-modulus constant derived deterministically from ``gamma_seed``."""
        theta = np.random.default_rng(self.gamma_seed).uniform(0.0, 2.0 * np.pi)
        return complex(np.exp(1j * theta))

    def replace(self, **changes) -> "TrackerConfig":
        return TrackerConfig(**{**asdict(self), **changes})

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "TrackerConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(doc) - names
        if unknown:
            raise ValueError(f"unknown tracker settings: {sorted(unknown)}")
        return cls(**doc)

    @classmethod
    def load(cls, path) -> "TrackerConfig":
        path = str(path)
        if path.endswith(".toml"):
            try:
                import tomllib
            except ModuleNotFoundError:  # python < 3.11
                import tomli as tomllib
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
            doc = doc.get("tracker", doc)
        else:
            with open(path) as fh:
                doc = json.load(fh)
        return cls.from_dict(doc)


@dataclass(frozen=True)
class PathResult:
    status: str
    endpoint: AlphaPoint
    source: Necklace | None
    steps_taken: int
    final_residual: float
    newton_iters: int = 0
    rejected_steps: int = 0

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "source": necklace_to_string(self.source) if self.source is not None else None,
            "steps_taken": self.steps_taken,
            "rejected_steps": self.rejected_steps,
            "newton_iters": self.newton_iters,
            "final_residual": self.final_residual,
            "endpoint": self.endpoint.to_dict(),
        }


def make_problem(target: SparseHypersurface, d, gamma: complex) -> HomotopyProblem:
    return HomotopyProblem(target=target, start=tilde_hypersurface(target.n), gamma=gamma, d=d)


class _PathSystem:
    """Residual, Jacobian and s-derivative of one homotopy on flat alpha vectors.

    With ``scale = lam`` the coefficients are ``(1 - s) gamma c_start + s lam c_target``.
    The residual is linear in the coefficients, so this traces the same
    projective segment as ``lam = 1`` under a monotone change of ``s`` and
    has the same solutions at ``s = 1``.
    """

    def __init__(self, hp: HomotopyProblem, scale: float = 1.0):
        self.hp = hp
        self.d = hp.d
        self.scale = scale
        self.evals = 0
        self._c_start = hp.gamma * hp.c_start
        self._c_target = scale * hp.c_target

    def coeffs(self, s):
        if s == 1:
            return self._c_target
        return (1 - s) * self._c_start + s * self._c_target

    def velocity(self):
        return self._c_target - self._c_start

    def basis(self, a):
        self.evals += 1
        return monomial_basis(self.hp.exps, self.d, a, with_jac=True)

    def residual_jac(self, a, s):
        vals, tans = self.basis(a)
        return residual_and_jacobian(self.coeffs(s), vals, tans, a)

    def tangent(self, a, s):
        """Davidenko direction ``da/ds = -J^{-1} dH/ds``."""
        vals, tans = self.basis(a)
        _, J = residual_and_jacobian(self.coeffs(s), vals, tans, a)
        dHds = np.zeros(a.size, dtype=complex)
        dHds[:-1] = self.velocity() @ vals[:, 1:]
        return np.linalg.solve(J, -dHds)


def balancing_scale(hp: HomotopyProblem, a) -> float:
    """Target weight that evens out the path speed at the two ends.

    At ``s = 0`` the speed is proportional to the weight while at ``s = 1``
    it is inversely proportional, so ``1 / sqrt(speed at 0)`` splits a large
    initial speed evenly between both ends.  Mild paths keep weight 1.
    """
    v0 = _max_abs(_PathSystem(hp).tangent(a, 0.0))
    return 1.0 / np.sqrt(v0) if v0 > 1.0 else 1.0


def _max_abs(v) -> float:
    return float(np.max(np.abs(v))) if v.size else 0.0


def _newton(sys: _PathSystem, a, s, cfg: TrackerConfig, iters: int, tol_res: float):
    """Fixed-s Newton.  Returns ``(a, ok, iterations, residual)``."""
    prev = np.inf
    for it in range(1, iters + 1):
        r, J = sys.residual_jac(a, s)
        res = _max_abs(r)
        if res <= tol_res:
            return a, True, it - 1, res
        try:
            delta = np.linalg.solve(J, r)
        except np.linalg.LinAlgError:
            return a, False, it, res
        a = a - delta
        step = _max_abs(delta)
        if not np.isfinite(step):
            return a, False, it, np.inf
        if it == 1 and step > cfg.max_correction * (1.0 + _max_abs(a)):
            return a, False, it, res
        if step > 0.25 * prev:
            return a, False, it, res
        prev = step
        if step <= cfg.path_tol * (1.0 + _max_abs(a)):
            r, _ = residual_and_jacobian(sys.coeffs(s), sys.basis(a)[0], None, a)
            return a, True, it, _max_abs(r)
    return a, False, iters, np.inf


def _predict(sys: _PathSystem, a, s, ds, method: str):
    if method == "euler":
        return a + ds * sys.tangent(a, s)
    k1 = sys.tangent(a, s)
    k2 = sys.tangent(a + 0.5 * ds * k1, s + 0.5 * ds)
    k3 = sys.tangent(a + 0.5 * ds * k2, s + 0.5 * ds)
    k4 = sys.tangent(a + ds * k3, s + ds)
    return a + ds / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def track_path(
    hp: HomotopyProblem,
    start: AlphaPoint,
    cfg: TrackerConfig = TrackerConfig(),
    source: Necklace | None = None,
    monitor: Callable[[float, np.ndarray], None] | None = None,
) -> PathResult:
    """Track one start point from ``s = 0`` to ``s = 1``.

    ``monitor`` (optional) is called with ``(s, alpha)`` after every accepted step.
    """
    d = hp.d
    a = np.array(start.flat, dtype=complex)
    scale = balancing_scale(hp, a) if cfg.balance else 1.0
    sys = _PathSystem(hp, scale)
    s = 0.0
    h = cfg.initial_step
    easy = 0
    steps = rejected = newton_total = 0

    def result(status, a, res):
        return PathResult(status, AlphaPoint.from_flat(d, a), source, steps, float(res), newton_total, rejected)

    while s < 1.0:
        if steps + rejected >= cfg.max_steps:
            return result(MAX_STEPS, a, np.inf)
        ds = min(h, 1.0 - s)
        s_next = 1.0 if ds == 1.0 - s else s + ds
        try:
            a_pred = _predict(sys, a, s, ds, cfg.predictor)
            a_new, ok, its, _ = _newton(sys, a_pred, s_next, cfg, cfg.max_newton_iters, cfg.newton_tol)
        except np.linalg.LinAlgError:
            ok, its, a_new = False, cfg.max_newton_iters, a
        newton_total += its
        if ok and _max_abs(a_new) > DIVERGENCE_BOUND:
            return result(DIVERGED, a_new, np.inf)
        if ok:
            a, s = a_new, s_next
            steps += 1
            if monitor is not None:
                monitor(s, a)
            if its <= 2:
                easy += 1
                if easy >= 2:
                    h = min(2.0 * h, cfg.max_step)
                    easy = 0
            else:
                easy = 0
        else:
            rejected += 1
            easy = 0
            h *= 0.5
            if h < cfg.min_step:
                return result(STEP_UNDERFLOW, a, np.inf)

    a, ok, its, res = _newton_polish(_PathSystem(hp), a, cfg)
    newton_total += its
    status = CONVERGED if res <= cfg.newton_tol else STEP_UNDERFLOW
    return result(status, a, res)


def _newton_polish(sys: _PathSystem, a, cfg: TrackerConfig):
    """Plain Newton at s = 1 until the residual meets ``newton_tol``, keeping the best iterate."""
    best_a, best_res = a, np.inf
    its = 0
    for its in range(cfg.endpoint_refine_iters + 1):
        r, J = sys.residual_jac(a, 1.0)
        res = _max_abs(r)
        if res < best_res:
            best_a, best_res = a, res
        if res <= cfg.newton_tol or its == cfg.endpoint_refine_iters:
            break
        try:
            a = a - np.linalg.solve(J, r)
        except np.linalg.LinAlgError:
            break
    return best_a, best_res <= cfg.newton_tol, its, best_res


def track_all(
    hp: HomotopyProblem,
    ss: StartSet,
    cfg: TrackerConfig = TrackerConfig(),
    workers: int = 1,
) -> list[PathResult]:
    """Track every start point; results come back in start order."""
    if ss.d != hp.d:
        raise ValueError(f"start set is for {ss.d.d}, problem for {hp.d.d}")

    def one(item):
        nk, p = item
        try:
            return track_path(hp, p, cfg, source=nk)
        except (np.linalg.LinAlgError, FloatingPointError) as exc:
            log.warning("path from %s failed: %s", necklace_to_string(nk), exc)
            return PathResult(STEP_UNDERFLOW, p, nk, 0, float("inf"))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, ss.points))
    return [one(item) for item in ss.points]


def path_results_to_json(results: Sequence[PathResult], **kw) -> str:
    return json.dumps([r.to_dict() for r in results], **kw)
