"""Isometric immersions between charts, their second fundamental form, and the
residual checks relating the Sasaki metrics of source and target.

Coordinates: an immersion maps an n-dimensional source chart into an
m-dimensional target chart. ``J`` is the m x n Jacobian and ``H[a, i, j]``
the second partials of the a-th target coordinate.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import fd
from .bundle import (TangentPoint, TTVector, connection_map, sasaki_metric,
                     vertical_lift)
from .core import (ChartManifold, check_point, christoffel_at, contract_christoffel,
                   metric_at, metric_partials_at, stencil_margin)
from .errors import DimensionError, RankError
from .tolerances import CURVE_STEP, FD_NESTED_STEP, FD_STEP

TOTALLY_GEODESIC = "TOTALLY_GEODESIC"
NOT_TOTALLY_GEODESIC = "NOT"
DEFAULT_TG_TOL = 1e-4
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class Immersion:
    map: Callable[[np.ndarray], np.ndarray]
    source: ChartManifold
    target: ChartManifold
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "immersion"
    # True when ``source`` carries the pullback metric by construction
    induced: bool = False

    @property
    def analytic(self) -> bool:
        return (self.jacobian is not None and self.hessian is not None
                and self.target.analytic and self.source.analytic)

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.map(np.asarray(x, dtype=float)), dtype=float)

    def jacobian_at(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.jacobian is not None:
            J = np.asarray(self.jacobian(x), dtype=float)
        else:
            check_point(self.source, x, stencil_margin(x))
            J = fd.jacobian(self.map, x, FD_STEP)
        if J.shape != (self.target.dim, self.source.dim):
            raise DimensionError(f"{self.name}: Jacobian has shape {J.shape}")
        return J

    def hessian_at(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.hessian is not None:
            return np.asarray(self.hessian(x), dtype=float)
        check_point(self.source, x, stencil_margin(x, FD_NESTED_STEP) * 2)
        return fd.hessian(self.map, x, FD_NESTED_STEP)

    def fd_variant(self) -> "Immersion":
        """The same immersion with every derivative taken by finite differences."""
        target = self.target.without_partials()
        if self.induced:
            return make_immersion(self.map, target, name=self.name,
                                  domain=self.source.domain, box=self.source.box,
                                  analytic=False)
        return dataclasses.replace(self, jacobian=None, hessian=None, target=target,
                                   source=self.source.without_partials())


def _induced_partials(J, H, gbar, dgbar):
    # d_k (J^T gbar J)_ij, with dgbar already in target coordinates
    term_h = np.einsum("aki,ab,bj->kij", H, gbar, J)
    term_g = np.einsum("ai,cab,ck,bj->kij", J, dgbar, J, J)
    return term_h + np.swapaxes(term_h, 1, 2) + term_g


def make_immersion(map_fn, target: ChartManifold, source: ChartManifold | None = None,
                   jacobian=None, hessian=None, name: str = "immersion",
                   domain=None, box=(None, None), analytic: bool = True,
                   dim: int | None = None) -> Immersion:
    """Build an :class:`Immersion`; without ``source`` the pullback metric is used.

    With ``analytic=False`` the closed-form Jacobian and Hessian are dropped and
    the induced metric partials come from nested central differences.
    """
    if not analytic:
        jacobian = hessian = None
    if source is not None:
        return Immersion(map_fn, source, target, jacobian, hessian, name, induced=False)
    if dim is None:
        if box[0] is None:
            raise DimensionError("induced source needs a dimension or a sampling box")
        dim = np.asarray(box[0]).size
    src_domain = domain or (lambda x, m=0.0: True)

    def in_domain(x, m=0.0):
        if not src_domain(x, m):
            return False
        return target.contains(np.asarray(map_fn(x), dtype=float), m)

    # derivative access only; the real source is assembled below
    stub = Immersion(map_fn, ChartManifold(dim=dim, metric=np.eye, domain=in_domain),
                     target, jacobian, hessian, name)

    def metric(x):
        J = stub.jacobian_at(x)
        return J.T @ metric_at(target, stub(x)) @ J

    partials = None
    if jacobian is not None and hessian is not None:
        def partials(x):
            y = stub(x)
            return _induced_partials(stub.jacobian_at(x), stub.hessian_at(x),
                                     metric_at(target, y), metric_partials_at(target, y))

    source = ChartManifold(
        dim=dim, metric=metric, metric_partials=partials, domain=in_domain,
        name=f"induced[{name}]", box=box,
        fd_step=FD_STEP if partials is not None else FD_NESTED_STEP,
    )
    return Immersion(map_fn, source, target, jacobian, hessian, name, induced=True)


def induced_metric(I: Immersion, x) -> np.ndarray:
    """Pullback J^T gbar J of the target metric."""
    x = check_point(I.source, x)
    J = I.jacobian_at(x)
    s = np.linalg.svd(J, compute_uv=False)
    if s.size < I.source.dim or s[-1] <= RANK_RTOL * max(s[0], 1.0):
        raise RankError(f"{I.name}: Jacobian not of full column rank at {x}")
    return J.T @ metric_at(I.target, I(x)) @ J


def isometry_residual(I: Immersion, x) -> float:
    """Gap between the declared source metric and the pullback metric."""
    return float(np.max(np.abs(induced_metric(I, x) - metric_at(I.source, x))))


def pushforward(I: Immersion, u: TangentPoint) -> TangentPoint:
    x = check_point(I.source, u.x)
    return TangentPoint(I(x), I.jacobian_at(x) @ u.v, I.target)


def double_pushforward(I: Immersion, X: TTVector) -> TTVector:
    """Differential of (x, v) -> (iota(x), J(x) v) applied to X."""
    u = X.at
    J = I.jacobian_at(u.x)
    H = I.hessian_at(u.x)
    return TTVector(pushforward(I, u), J @ X.a,
                    np.einsum("aij,i,j->a", H, X.a, u.v) + J @ X.b)


def double_pushforward_by_curve(I: Immersion, X: TTVector, rel_step: float = CURVE_STEP) -> TTVector:
    """iota_** X as the velocity of iota_* along the curve (x + t a, v + t b).

    Independent of the closed form in :func:`double_pushforward`: only the map
    and its first derivative are sampled, on a five-point stencil.
    """
    u = X.at
    scale = max(1.0, float(np.max(np.abs(X.a))), float(np.max(np.abs(X.b))))
    h = fd.step_for(u.x, rel_step) / scale
    check_point(I.source, u.x, 2 * h * scale + stencil_margin(u.x))
    base = fd.derivative5(lambda t: I(u.x + t * X.a), h)
    fiber = fd.derivative5(lambda t: I.jacobian_at(u.x + t * X.a) @ (u.v + t * X.b), h)
    return TTVector(pushforward(I, u), base, fiber)


def second_fundamental_form(I: Immersion, x, u_vec, w_vec) -> np.ndarray:
    """B(u, w) as an m-vector in target coordinates."""
    x = check_point(I.source, x)
    u_vec = np.asarray(u_vec, dtype=float)
    w_vec = np.asarray(w_vec, dtype=float)
    J = I.jacobian_at(x)
    H = I.hessian_at(x)
    gamma_bar = christoffel_at(I.target, I(x))
    gamma = christoffel_at(I.source, x)
    return (np.einsum("aij,i,j->a", H, u_vec, w_vec)
            + contract_christoffel(gamma_bar, J @ u_vec, J @ w_vec)
            - J @ contract_christoffel(gamma, u_vec, w_vec))


def sff_symmetry_residual(I: Immersion, x, u_vec, w_vec) -> float:
    return float(np.max(np.abs(second_fundamental_form(I, x, u_vec, w_vec)
                               - second_fundamental_form(I, x, w_vec, u_vec))))


def sff_normality_residual(I: Immersion, x, u_vec, w_vec, z) -> float:
    """|gbar(J z, B(u, w))|: B must be normal to the image."""
    B = second_fundamental_form(I, x, u_vec, w_vec)
    gbar = metric_at(I.target, I(x))
    return abs(float((I.jacobian_at(x) @ z) @ gbar @ B))


def check_vstar(I: Immersion, u: TangentPoint, f) -> float:
    """Naturality of the vertical lift under the double pushforward."""
    lhs = double_pushforward_by_curve(I, vertical_lift(u, f))
    pu = pushforward(I, u)
    rhs = vertical_lift(pu, I.jacobian_at(u.x) @ np.asarray(f, dtype=float))
    return float(np.max(np.abs(lhs.slots() - rhs.slots())))


def check_vsas(I: Immersion, u: TangentPoint, f1, f2) -> float:
    pu = pushforward(I, u)
    lhs = sasaki_metric(pu, double_pushforward(I, vertical_lift(u, f1)),
                        double_pushforward(I, vertical_lift(u, f2)))
    rhs = sasaki_metric(u, vertical_lift(u, f1), vertical_lift(u, f2))
    return abs(lhs - rhs)


def check_cstar(I: Immersion, u: TangentPoint, direction) -> float:
    """Max-norm gap between iota_** C(u, d) and Cbar(iota_* u, J d) + vertical B(v, d)."""
    d = np.asarray(direction, dtype=float)
    lhs = double_pushforward_by_curve(I, connection_map(u, d))
    pu = pushforward(I, u)
    rhs = connection_map(pu, I.jacobian_at(u.x) @ d) \
        + vertical_lift(pu, second_fundamental_form(I, u.x, u.v, d))
    return float(np.max(np.abs(lhs.slots() - rhs.slots())))


def pullback_sasaki(I: Immersion, u: TangentPoint, X: TTVector, Y: TTVector) -> float:
    """Target Sasaki metric at iota_* u evaluated on iota_** X and iota_** Y."""
    return sasaki_metric(pushforward(I, u), double_pushforward(I, X),
                         double_pushforward(I, Y))


def sff_correction(I: Immersion, u: TangentPoint, X: TTVector, Y: TTVector) -> float:
    """gbar(B(v, a_X), B(v, a_Y)) with v the fiber of u and a the base components."""
    bx = second_fundamental_form(I, u.x, u.v, X.a)
    by = second_fundamental_form(I, u.x, u.v, Y.a)
    return float(bx @ metric_at(I.target, I(u.x)) @ by)


def theorem_residual(I: Immersion, u: TangentPoint, X: TTVector, Y: TTVector) -> float:
    return abs(pullback_sasaki(I, u, X, Y) - sasaki_metric(u, X, Y)
               - sff_correction(I, u, X, Y))


def orthonormal_frame(M: ChartManifold, x, rng: np.random.Generator) -> np.ndarray:
    """Columns form a g(x)-orthonormal basis, obtained from a random basis."""
    g = metric_at(M, x)
    R = rng.standard_normal((M.dim, M.dim))
    # R^T g R = L L^T  =>  R L^-T is orthonormal
    L = np.linalg.cholesky(R.T @ g @ R)
    return np.linalg.solve(L, R.T).T


@dataclass(frozen=True)
class Classification:
    verdict: str
    verdict_by_deviation: str
    max_b_norm: float
    max_deviation: float
    tol: float
    samples: int

    @property
    def consistent(self) -> bool:
        low = self.max_b_norm < self.tol and self.max_deviation < self.tol
        high = self.max_b_norm > 10 * self.tol and self.max_deviation > 10 * self.tol
        return (low or high) and self.verdict == self.verdict_by_deviation


def is_totally_geodesic(I: Immersion, samples: int = 50, tol: float = DEFAULT_TG_TOL,
                        seed: int = 0, points=None) -> Classification:
    """Classify by the largest |B| over orthonormal frames and, independently, by
    the largest gap between the pulled-back and intrinsic Sasaki metrics."""
    rng = np.random.default_rng(seed)
    max_b = 0.0
    max_dev = 0.0
    if points is None:
        points = [I.source.sample(rng, margin=0.05) for _ in range(samples)]
    for x in points:
        E = orthonormal_frame(I.source, x, rng)
        gbar = metric_at(I.target, I(x))
        for i in range(I.source.dim):
            for j in range(I.source.dim):
                B = second_fundamental_form(I, x, E[:, i], E[:, j])
                max_b = max(max_b, float(np.sqrt(max(B @ gbar @ B, 0.0))))
                u = TangentPoint(x, E[:, j], I.source)
                X = connection_map(u, E[:, i])
                dev = abs(pullback_sasaki(I, u, X, X) - sasaki_metric(u, X, X))
                max_dev = max(max_dev, dev)

    def verdict(val):
        return TOTALLY_GEODESIC if val < tol else NOT_TOTALLY_GEODESIC

    return Classification(verdict(max_b), verdict(max_dev), max_b, max_dev, tol, len(points))
