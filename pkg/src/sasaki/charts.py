"""Builtin chart catalog, addressable by string name.

Names: ``euclidean:n``, ``sphere2:r``, ``sphere2stereo:r``, ``halfplane``,
``circle:r``, ``sphere3:r``. The radius defaults to 1 when omitted.
"""

import numpy as np

from .core import ChartManifold
from .errors import ScenarioNotFoundError

# polar angles are kept this far from 0 and pi
POLE_EPS = 1e-3
STEREO_RADIUS = 10.0
_SAMPLE_POLAR = (0.2, np.pi - 0.2)


def euclidean(n: int = 2) -> ChartManifold:
    return ChartManifold(
        dim=n,
        metric=lambda x: np.eye(n),
        metric_partials=lambda x: np.zeros((n, n, n)),
        name=f"euclidean:{n}",
        box=(-2.0 * np.ones(n), 2.0 * np.ones(n)),
    )


def _polar_ok(angle, margin):
    return POLE_EPS + margin < angle < np.pi - POLE_EPS - margin


def sphere2(r: float = 1.0) -> ChartManifold:
    """Round 2-sphere in (theta, phi), theta the polar angle."""
    r2 = r * r

    def metric(x):
        return np.diag([r2, r2 * np.sin(x[0]) ** 2])

    def partials(x):
        dg = np.zeros((2, 2, 2))
        dg[0, 1, 1] = 2 * r2 * np.sin(x[0]) * np.cos(x[0])
        return dg

    return ChartManifold(
        dim=2, metric=metric, metric_partials=partials,
        domain=lambda x, m=0.0: _polar_ok(x[0], m),
        name=f"sphere2:{r:g}",
        box=([_SAMPLE_POLAR[0], -np.pi], [_SAMPLE_POLAR[1], np.pi]),
    )


def sphere2_stereo(r: float = 1.0) -> ChartManifold:
    """Round 2-sphere via stereographic projection from the south pole."""
    r2 = r * r

    def metric(x):
        return 4 * r2 / (1 + x @ x) ** 2 * np.eye(2)

    def partials(x):
        # d_k [4 r^2 (1+|x|^2)^-2] = -16 r^2 x_k (1+|x|^2)^-3
        c = -16 * r2 / (1 + x @ x) ** 3
        return c * x[:, None, None] * np.eye(2)[None, :, :]

    return ChartManifold(
        dim=2, metric=metric, metric_partials=partials,
        domain=lambda x, m=0.0: float(np.hypot(*x)) < STEREO_RADIUS - m,
        name=f"sphere2stereo:{r:g}",
        box=([-1.5, -1.5], [1.5, 1.5]),
    )


def halfplane() -> ChartManifold:
    """Hyperbolic upper half-plane, g = y^-2 delta."""

    def partials(x):
        dg = np.zeros((2, 2, 2))
        dg[1] = -2.0 / x[1] ** 3 * np.eye(2)
        return dg

    return ChartManifold(
        dim=2,
        metric=lambda x: np.eye(2) / x[1] ** 2,
        metric_partials=partials,
        domain=lambda x, m=0.0: x[1] > m,
        name="halfplane",
        box=([-2.0, 0.3], [2.0, 3.0]),
    )


def circle(r: float = 1.0) -> ChartManifold:
    """Circle of radius r in its angle chart; g = r^2."""
    return ChartManifold(
        dim=1,
        metric=lambda x: np.array([[r * r]]),
        metric_partials=lambda x: np.zeros((1, 1, 1)),
        name=f"circle:{r:g}",
        box=([-np.pi], [np.pi]),
    )


def sphere3(r: float = 1.0) -> ChartManifold:
    """Round 3-sphere in hyperspherical angles (chi, theta, phi)."""
    r2 = r * r

    def metric(x):
        s1, s2 = np.sin(x[0]) ** 2, np.sin(x[1]) ** 2
        return np.diag([r2, r2 * s1, r2 * s1 * s2])

    def partials(x):
        s1, c1 = np.sin(x[0]), np.cos(x[0])
        s2, c2 = np.sin(x[1]), np.cos(x[1])
        dg = np.zeros((3, 3, 3))
        dg[0, 1, 1] = 2 * r2 * s1 * c1
        dg[0, 2, 2] = 2 * r2 * s1 * c1 * s2 * s2
        dg[1, 2, 2] = 2 * r2 * s1 * s1 * s2 * c2
        return dg

    return ChartManifold(
        dim=3, metric=metric, metric_partials=partials,
        domain=lambda x, m=0.0: _polar_ok(x[0], m) and _polar_ok(x[1], m),
        name=f"sphere3:{r:g}",
        box=([_SAMPLE_POLAR[0], _SAMPLE_POLAR[0], -np.pi],
             [_SAMPLE_POLAR[1], _SAMPLE_POLAR[1], np.pi]),
    )


_FACTORIES = {
    "euclidean": lambda arg: euclidean(int(arg) if arg else 2),
    "sphere2": lambda arg: sphere2(float(arg) if arg else 1.0),
    "sphere2stereo": lambda arg: sphere2_stereo(float(arg) if arg else 1.0),
    "halfplane": lambda arg: halfplane(),
    "circle": lambda arg: circle(float(arg) if arg else 1.0),
    "sphere3": lambda arg: sphere3(float(arg) if arg else 1.0),
}

CHART_NAMES = tuple(_FACTORIES)


def manifold(name: str) -> ChartManifold:
    """Look up a builtin chart, e.g. ``manifold("sphere2:1")``."""
    key, _, arg = name.partition(":")
    if key not in _FACTORIES:
        raise ScenarioNotFoundError(f"unknown manifold {name!r}; known: {', '.join(CHART_NAMES)}")
    try:
        return _FACTORIES[key](arg)
    except ValueError as exc:
        raise ScenarioNotFoundError(f"bad parameter in manifold name {name!r}") from exc


def builtin_manifolds() -> list[ChartManifold]:
    return [euclidean(2), euclidean(3), sphere2(1.0), sphere2_stereo(1.0),
            halfplane(), circle(1.0), sphere3(1.0)]
