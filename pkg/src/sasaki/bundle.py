"""The tangent bundle TM in induced coordinates (x, v).

A tangent vector to TM at (x, v) is stored as the pair (a, b): ``a`` is the
base-direction component (its image under the differential of the bundle
projection) and ``b`` the fiber-direction component. In these coordinates

* the vertical lift of f at (x, v) is (0, f),
* the horizontal lift (connection map) of d at (x, v) is (d, -Γ(x)(v, d)),
* the canonical flip sends (x, v; a, b) to (x, a; v, b).

The horizontal formula follows from writing the covariant derivative of a
section Y as Y_* d minus the horizontal lift of d at Y(x) and reading off
the fiber component.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import fd
from .core import (ChartManifold, check_point, christoffel_at, contract_christoffel,
                   metric_at)
from .errors import BasepointMismatchError, CurveMismatchError, DimensionError
from .tolerances import BASEPOINT_TOL, CURVE_STEP, STENCIL5_STEP, step_for


def _vec(v, n, what="vector"):
    v = np.asarray(v, dtype=float)
    if v.shape != (n,):
        raise DimensionError(f"{what} must have shape ({n},), got {v.shape}")
    return v


@dataclass(frozen=True, eq=False)
class TangentPoint:
    x: np.ndarray
    v: np.ndarray
    manifold: ChartManifold

    def __post_init__(self):
        n = self.manifold.dim
        object.__setattr__(self, "x", _vec(self.x, n, "base point"))
        object.__setattr__(self, "v", _vec(self.v, n, "fiber vector"))

    @property
    def dim(self) -> int:
        return self.manifold.dim

    def coords(self) -> np.ndarray:
        return np.concatenate([self.x, self.v])


@dataclass(frozen=True, eq=False)
class TTVector:
    at: TangentPoint
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        n = self.at.dim
        object.__setattr__(self, "a", _vec(self.a, n, "base component"))
        object.__setattr__(self, "b", _vec(self.b, n, "fiber component"))

    def components(self) -> np.ndarray:
        return np.concatenate([self.a, self.b])

    def slots(self) -> np.ndarray:
        """All four coordinate slots (x, v, a, b) flattened."""
        return np.concatenate([self.at.x, self.at.v, self.a, self.b])

    def __add__(self, other: "TTVector") -> "TTVector":
        _same_basepoint(self.at, other.at)
        return TTVector(self.at, self.a + other.a, self.b + other.b)

    def scale(self, c: float) -> "TTVector":
        return TTVector(self.at, c * self.a, c * self.b)


@dataclass(frozen=True, eq=False)
class HVSplit:
    at: TangentPoint
    h: np.ndarray
    w: np.ndarray


@dataclass(frozen=True, eq=False)
class VerticalPair:
    at: TangentPoint
    first: np.ndarray
    second: np.ndarray


def _same_basepoint(u: TangentPoint, w: TangentPoint) -> None:
    if u is w:
        return
    if u.manifold is not w.manifold and u.manifold.name != w.manifold.name:
        raise BasepointMismatchError(
            f"tangent points live on different manifolds ({u.manifold.name}, {w.manifold.name})")
    gap = max(np.max(np.abs(u.x - w.x)), np.max(np.abs(u.v - w.v)))
    if gap > BASEPOINT_TOL:
        raise BasepointMismatchError(f"basepoints differ by {gap:.3g}")


def vertical_lift(u: TangentPoint, f) -> TTVector:
    f = _vec(f, u.dim)
    return TTVector(u, np.zeros(u.dim), f.copy())


def horizontal_part(u: TangentPoint, d) -> np.ndarray:
    """Fiber component -Γ(x)(v, d) of the horizontal lift."""
    gamma = christoffel_at(u.manifold, u.x)
    return -contract_christoffel(gamma, u.v, d)


def connection_map(u: TangentPoint, direction) -> TTVector:
    d = _vec(direction, u.dim)
    return TTVector(u, d.copy(), horizontal_part(u, d))


def canonical_flip(X: TTVector) -> TTVector:
    flipped = TangentPoint(X.at.x.copy(), X.a.copy(), X.at.manifold)
    return TTVector(flipped, X.at.v.copy(), X.b.copy())


def xi(u: TangentPoint, h, w) -> TTVector:
    """Assemble a TTVector from horizontal datum ``h`` and vertical datum ``w``."""
    h = _vec(h, u.dim)
    w = _vec(w, u.dim)
    return TTVector(u, h.copy(), w + horizontal_part(u, h))


def xi_inverse(X: TTVector) -> HVSplit:
    u = X.at
    gamma = christoffel_at(u.manifold, u.x)
    return HVSplit(u, X.a.copy(), X.b + contract_christoffel(gamma, u.v, X.a))


def _split_pair(u: TangentPoint, X: TTVector, Y: TTVector):
    _same_basepoint(u, X.at)
    _same_basepoint(u, Y.at)
    gamma = christoffel_at(u.manifold, u.x)
    wx = X.b + contract_christoffel(gamma, u.v, X.a)
    wy = Y.b + contract_christoffel(gamma, u.v, Y.a)
    return X.a, wx, Y.a, wy


def sasaki_metric(u: TangentPoint, X: TTVector, Y: TTVector) -> float:
    hx, wx, hy, wy = _split_pair(u, X, Y)
    g = metric_at(u.manifold, u.x)
    return float(hx @ g @ hy + wx @ g @ wy)


def sasaki_matrix(u: TangentPoint) -> np.ndarray:
    """Gram matrix of the Sasaki metric in the (a, b) coordinates at ``u``."""
    n = u.dim
    g = metric_at(u.manifold, u.x)
    gamma = christoffel_at(u.manifold, u.x)
    # w = b + K a with K[k, j] = Γ^k_ij v^i
    K = np.einsum("kij,i->kj", gamma, u.v)
    T = np.block([[np.eye(n), np.zeros((n, n))], [K, np.eye(n)]])
    G = np.block([[g, np.zeros((n, n))], [np.zeros((n, n)), g]])
    return T.T @ G @ T


def psi(X: TTVector) -> VerticalPair:
    split = xi_inverse(X)
    return VerticalPair(X.at, split.h, split.w)


def whitney_metric(P: VerticalPair, Q: VerticalPair) -> float:
    _same_basepoint(P.at, Q.at)
    g = metric_at(P.at.manifold, P.at.x)
    return float(P.first @ g @ Q.first + P.second @ g @ Q.second)


Curve = Callable[[float], TangentPoint]


def tg_tilde(u_curve: Curve, v_curve: Curve, step: float = CURVE_STEP) -> float:
    """d/dt g(u(t), v(t)) at t = 0 for two curves in TM over a common base curve."""

    def value(t):
        p, q = u_curve(t), v_curve(t)
        gap = np.max(np.abs(p.x - q.x))
        if gap > BASEPOINT_TOL:
            raise CurveMismatchError(f"base projections differ by {gap:.3g} at t={t:g}")
        g = metric_at(p.manifold, p.x)
        return float(p.v @ g @ q.v)

    return fd.derivative5(value, step)


def horizontal_curve(u: TangentPoint, direction) -> Curve:
    """First-order curve through ``u`` whose velocity at 0 is connection_map(u, direction)."""
    d = _vec(direction, u.dim)
    slope = horizontal_part(u, d)
    return lambda t: TangentPoint(u.x + t * d, u.v + t * slope, u.manifold)


def covdev_via_connection(M: ChartManifold, field, x, direction) -> np.ndarray:
    """Covariant derivative recovered as the vertical part of Y_* d - C(Y, d)."""
    d = _vec(direction, M.dim)
    x = check_point(M, x, 2 * step_for(x, STENCIL5_STEP))
    pushed = fd.directional(field, x, d)  # fiber component of Y_* d
    y = TangentPoint(x, field(x), M)
    diff_b = pushed - connection_map(y, d).b  # base components cancel (d - d)
    return diff_b
