"""Riemannian metrics on a single coordinate chart.

A :class:`ChartManifold` is a chart domain together with a metric tensor
field. Metric partials are taken from the analytic callable when one is
supplied and from central differences otherwise; every higher-level object
(Christoffel symbols, covariant derivatives, the connection map on TM) is
built on top of :func:`metric_partials_at`.
"""

from __future__ import annotations

import dataclasses
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import fd
from .errors import DimensionError, DomainError, NonSPDError, SingularMetricError
from .tolerances import COND_CAP, FD_STEP, MARGIN_STEPS, STENCIL5_STEP, SYM_RTOL, step_for


def _everywhere(x, margin=0.0):
    return True


@dataclass(frozen=True)
class ChartManifold:
    dim: int
    metric: Callable[[np.ndarray], np.ndarray]
    metric_partials: Optional[Callable[[np.ndarray], np.ndarray]] = None
    domain: Callable[[np.ndarray, float], bool] = _everywhere
    name: str = "chart"
    # sampling box (lo, hi); points are rejection-sampled against ``domain``
    box: tuple = (None, None)
    # relative FD step for metric partials; 1e-4 when the metric is itself FD-built
    fd_step: float = FD_STEP

    @property
    def analytic(self) -> bool:
        return self.metric_partials is not None

    def without_partials(self, fd_step: float | None = None) -> "ChartManifold":
        """Same manifold, forced onto the finite-difference path."""
        return dataclasses.replace(
            self, metric_partials=None, fd_step=fd_step or self.fd_step)

    def contains(self, x, margin: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return x.shape == (self.dim,) and bool(np.all(np.isfinite(x))) \
            and bool(self.domain(x, margin))

    def sample(self, rng: np.random.Generator, margin: float = 0.0,
               max_tries: int = 1000) -> np.ndarray:
        lo, hi = self.box
        lo = -np.ones(self.dim) if lo is None else np.asarray(lo, dtype=float)
        hi = np.ones(self.dim) if hi is None else np.asarray(hi, dtype=float)
        for _ in range(max_tries):
            x = rng.uniform(lo, hi)
            if self.contains(x, margin):
                return x
        raise DomainError(f"could not sample an interior point of {self.name}")

    def __repr__(self) -> str:
        return f"ChartManifold({self.name!r}, dim={self.dim})"


def stencil_margin(x, rel_step=FD_STEP) -> float:
    return MARGIN_STEPS * step_for(x, rel_step)


def check_point(M: ChartManifold, x, margin: float = 0.0) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (M.dim,):
        raise DimensionError(f"{M.name}: expected a {M.dim}-vector, got shape {x.shape}")
    if not M.contains(x, margin):
        raise DomainError(f"{M.name}: point {x} outside the chart (margin {margin:g})")
    return x


def metric_at(M: ChartManifold, x, check_spd: bool = True) -> np.ndarray:
    """Metric matrix g(x), validated as symmetric positive definite."""
    x = check_point(M, x)
    g = np.asarray(M.metric(x), dtype=float)
    if g.shape != (M.dim, M.dim):
        raise DimensionError(f"{M.name}: metric has shape {g.shape}")
    if check_spd:
        scale = max(np.max(np.abs(g)), 1e-300)
        if np.max(np.abs(g - g.T)) > SYM_RTOL * scale:
            raise NonSPDError(f"{M.name}: metric not symmetric at {x}")
        if np.linalg.eigvalsh(g)[0] <= 0.0:
            raise NonSPDError(f"{M.name}: metric not positive definite at {x}")
    return g


def metric_partials_at(M: ChartManifold, x) -> np.ndarray:
    """``dg[k, i, j] = d_k g_ij`` at ``x``."""
    x = np.asarray(x, dtype=float)
    if M.metric_partials is not None:
        check_point(M, x)
        return np.asarray(M.metric_partials(x), dtype=float)
    check_point(M, x, stencil_margin(x, M.fd_step))
    # jacobian puts the derivative index last
    return np.moveaxis(fd.jacobian(M.metric, x, M.fd_step), -1, 0)


def inverse_metric_at(M: ChartManifold, x) -> np.ndarray:
    g = metric_at(M, x)
    if np.linalg.cond(g) > COND_CAP:
        raise SingularMetricError(f"{M.name}: cond(g) exceeds {COND_CAP:g} at {x}")
    return np.linalg.inv(g)


_GAMMA_CACHE: OrderedDict = OrderedDict()
_GAMMA_CACHE_SIZE = 64
_GAMMA_LOCK = threading.Lock()


def christoffel_at(M: ChartManifold, x) -> np.ndarray:
    """Levi-Civita symbols ``gamma[k, i, j]`` = Γ^k_ij at ``x``."""
    x = np.asarray(x, dtype=float)
    key = (id(M), x.tobytes())
    with _GAMMA_LOCK:
        hit = _GAMMA_CACHE.get(key)
    # the stored manifold guards against id() reuse after garbage collection
    if hit is not None and hit[0] is M:
        return hit[1].copy()
    dg = metric_partials_at(M, x)
    ginv = inverse_metric_at(M, x)
    # first kind: [l, i, j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    first = 0.5 * (np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg)
    gamma = np.einsum("kl,lij->kij", ginv, first)
    with _GAMMA_LOCK:
        _GAMMA_CACHE[key] = (M, gamma)
        while len(_GAMMA_CACHE) > _GAMMA_CACHE_SIZE:
            _GAMMA_CACHE.popitem(last=False)
    return gamma.copy()


def contract_christoffel(gamma: np.ndarray, v, w) -> np.ndarray:
    """Γ(v, w)^k = Γ^k_ij v^i w^j."""
    return np.einsum("kij,i,j->k", gamma, v, w)


def covariant_derivative(M: ChartManifold, x, y_field, direction) -> np.ndarray:
    """∇_direction Y at ``x`` for a vector field given as a callable on the chart."""
    x = np.asarray(x, dtype=float)
    direction = np.asarray(direction, dtype=float)
    check_point(M, x, stencil_margin(x))
    dy = fd.jacobian(y_field, x)
    gamma = christoffel_at(M, x)
    return dy @ direction + contract_christoffel(gamma, direction, y_field(x))


def check_levi_civita(M: ChartManifold, x) -> tuple[float, float]:
    """(metric compatibility residual, torsion residual) of the Christoffel symbols.

    Compatibility is judged against five-point derivatives of the metric, not
    the partials the symbols were built from.
    """
    x = np.asarray(x, dtype=float)
    g = metric_at(M, x)
    gamma = christoffel_at(M, x)
    check_point(M, x, 2 * step_for(x, STENCIL5_STEP))
    dg = np.stack([fd.directional(M.metric, x, e) for e in np.eye(M.dim)])
    # d_k g_ij - Γ^l_ki g_lj - Γ^l_kj g_il
    compat = dg - np.einsum("lki,lj->kij", gamma, g) - np.einsum("lkj,il->kij", gamma, g)
    torsion = gamma - np.swapaxes(gamma, 1, 2)
    return float(np.max(np.abs(compat))), float(np.max(np.abs(torsion)))


def partials_agreement(M: ChartManifold, x) -> float:
    """Max gap between analytic metric partials and central differences."""
    if M.metric_partials is None:
        return 0.0
    analytic = metric_partials_at(M, x)
    numeric = metric_partials_at(M.without_partials(), x)
    return float(np.max(np.abs(analytic - numeric)))
