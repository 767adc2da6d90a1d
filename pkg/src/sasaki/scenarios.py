"""Catalog of immersions used by the verification harness.

Each map kind supplies the map with closed-form Jacobian and Hessian plus a
default sampling box for the source chart. A scenario pairs a map with a
source chart (a builtin name, or ``"induced"`` for the pullback metric) and
a target chart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .charts import manifold
from .errors import ScenarioNotFoundError
from .immersion import NOT_TOTALLY_GEODESIC, TOTALLY_GEODESIC, Immersion, make_immersion

SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class MapKind:
    build: object  # params -> (map, jacobian, hessian, dim, box)
    defaults: dict
    description: str


def _linear(matrix, offset=None):
    A = np.asarray(matrix, dtype=float)
    b = np.zeros(A.shape[0]) if offset is None else np.asarray(offset, dtype=float)
    n = A.shape[1]
    return (lambda x: A @ x + b, lambda x: A, lambda x: np.zeros((A.shape[0], n, n)),
            n, (-2.0 * np.ones(n), 2.0 * np.ones(n)))


def _latitude(theta):
    # t -> (theta, t) in the (theta, phi) chart of the 2-sphere
    J = np.array([[0.0], [1.0]])
    return (lambda x: np.array([theta, x[0]]), lambda x: J,
            lambda x: np.zeros((2, 1, 1)), 1, ([-np.pi], [np.pi]))


def _sphere_spherical(radius):
    r = radius

    def f(x):
        st, ct, sp, cp = np.sin(x[0]), np.cos(x[0]), np.sin(x[1]), np.cos(x[1])
        return r * np.array([st * cp, st * sp, ct])

    def jac(x):
        st, ct, sp, cp = np.sin(x[0]), np.cos(x[0]), np.sin(x[1]), np.cos(x[1])
        return r * np.array([[ct * cp, -st * sp], [ct * sp, st * cp], [-st, 0.0]])

    def hess(x):
        st, ct, sp, cp = np.sin(x[0]), np.cos(x[0]), np.sin(x[1]), np.cos(x[1])
        H = np.zeros((3, 2, 2))
        H[:, 0, 0] = [-st * cp, -st * sp, -ct]
        H[:, 0, 1] = H[:, 1, 0] = [-ct * sp, ct * cp, 0.0]
        H[:, 1, 1] = [-st * cp, -st * sp, 0.0]
        return r * H

    return f, jac, hess, 2, ([0.2, -np.pi], [np.pi - 0.2, np.pi])


def _sphere_stereographic(radius):
    # projection from the south pole; the chart origin maps to the north pole
    r = radius
    eye = np.eye(2)

    def f(x):
        s = x @ x
        return r * np.array([2 * x[0], 2 * x[1], 1 - s]) / (1 + s)

    def jac(x):
        D = 1 + x @ x
        top = 2 * (eye / D - 2 * np.outer(x, x) / D ** 2)
        return r * np.vstack([top, -4 * x / D ** 2])

    def hess(x):
        D = 1 + x @ x
        H = np.zeros((3, 2, 2))
        for i in range(2):
            # d_k d_l (x_i / D)
            H[i] = 2 * (-2 * (np.outer(eye[i], x) + np.outer(x, eye[i]) + x[i] * eye) / D ** 2
                        + 8 * x[i] * np.outer(x, x) / D ** 3)
        H[2] = 2 * (-2 * eye / D ** 2 + 8 * np.outer(x, x) / D ** 3)
        return r * H

    return f, jac, hess, 2, ([-1.5, -1.5], [1.5, 1.5])


def _sphere3_slice(chi):
    # (theta, phi) -> (chi, theta, phi) in hyperspherical angles
    J = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    return (lambda x: np.array([chi, x[0], x[1]]), lambda x: J,
            lambda x: np.zeros((3, 2, 2)), 2, ([0.2, -np.pi], [np.pi - 0.2, np.pi]))


def _clifford():
    # (alpha, beta) -> point (cos b, sin b, cos a, sin a)/sqrt 2 of R^4, written in
    # the hyperspherical chart x1 = cos chi, x2 = sin chi cos theta,
    # (x3, x4) = sin chi sin theta (cos phi, sin phi)
    def f(x):
        a, b = x
        return np.array([np.arccos(np.cos(b) * SQRT_HALF), np.arctan2(1.0, np.sin(b)), a])

    def jac(x):
        b = x[1]
        sb, cb = np.sin(b), np.cos(b)
        return np.array([[0.0, sb / np.sqrt(2 - cb * cb)],
                         [0.0, -cb / (1 + sb * sb)],
                         [1.0, 0.0]])

    def hess(x):
        b = x[1]
        sb, cb = np.sin(b), np.cos(b)
        H = np.zeros((3, 2, 2))
        H[0, 1, 1] = cb / (2 - cb * cb) ** 1.5
        H[1, 1, 1] = sb * (2 + cb * cb) / (1 + sb * sb) ** 2
        return H

    return f, jac, hess, 2, ([-np.pi, -np.pi], [np.pi, np.pi])


def _paraboloid(curvature):
    c = curvature
    return (lambda x: np.array([x[0], x[1], 0.5 * c * (x @ x)]),
            lambda x: np.array([[1.0, 0.0], [0.0, 1.0], [c * x[0], c * x[1]]]),
            lambda x: np.concatenate([np.zeros((2, 2, 2)), c * np.eye(2)[None]], axis=0),
            2, ([-1.0, -1.0], [1.0, 1.0]))


def _helix(radius, pitch):
    a, b = radius, pitch
    return (lambda x: np.array([a * np.cos(x[0]), a * np.sin(x[0]), b * x[0]]),
            lambda x: np.array([[-a * np.sin(x[0])], [a * np.cos(x[0])], [b]]),
            lambda x: np.array([-a * np.cos(x[0]), -a * np.sin(x[0]), 0.0]).reshape(3, 1, 1),
            1, ([-np.pi], [np.pi]))


MAP_KINDS = {
    "linear": MapKind(_linear, {"offset": None}, "affine map x -> A x + b"),
    "latitude": MapKind(_latitude, {"theta": np.pi / 2}, "circle of latitude in the sphere chart"),
    "sphere-spherical": MapKind(_sphere_spherical, {"radius": 1.0}, "round sphere, polar angles"),
    "sphere-stereographic": MapKind(_sphere_stereographic, {"radius": 1.0},
                                    "round sphere, stereographic chart"),
    "sphere3-slice": MapKind(_sphere3_slice, {"chi": np.pi / 2}, "level set chi = const of S^3"),
    "clifford": MapKind(_clifford, {}, "Clifford torus in S^3"),
    "paraboloid": MapKind(_paraboloid, {"curvature": 1.0}, "graph of c |x|^2 / 2"),
    "helix": MapKind(_helix, {"radius": 1.0, "pitch": 1.0}, "circular helix"),
}


def build_map(kind: str, params: dict | None = None):
    if kind not in MAP_KINDS:
        raise ScenarioNotFoundError(f"unknown map kind {kind!r}; known: {', '.join(MAP_KINDS)}")
    entry = MAP_KINDS[kind]
    merged = dict(entry.defaults)
    unknown = set(params or {}) - set(merged) - ({"matrix"} if kind == "linear" else set())
    if unknown:
        raise ScenarioNotFoundError(f"unknown parameters for map {kind!r}: {sorted(unknown)}")
    merged.update(params or {})
    return entry.build(**merged)


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    source: str  # builtin chart name or "induced"
    target: str
    map_kind: str
    params: dict = field(default_factory=dict)
    expected: Optional[str] = None

    def immersion(self, mode: str = "analytic") -> Immersion:
        f, jac, hess, dim, box = build_map(self.map_kind, self.params)
        target = manifold(self.target)
        if self.source == "induced":
            I = make_immersion(f, target, jacobian=jac, hessian=hess, name=self.name,
                               box=box, dim=dim)
        else:
            src = manifold(self.source)
            if src.dim != dim:
                raise ScenarioNotFoundError(
                    f"{self.name}: source {self.source} has dimension {src.dim}, map expects {dim}")
            I = make_immersion(f, target, source=src, jacobian=jac, hessian=hess, name=self.name)
        return I.fd_variant() if mode == "fd" else I


_S45 = repr(float(np.sin(np.pi / 4)))

SCENARIOS = {s.name: s for s in [
    Scenario("plane-in-e3", "coordinate plane z = 0 in Euclidean 3-space",
             "euclidean:2", "euclidean:3", "linear",
             {"matrix": [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]}, TOTALLY_GEODESIC),
    Scenario("equator-in-sphere2", "equator of the unit sphere (great circle)",
             "circle:1", "sphere2:1", "latitude", {"theta": float(np.pi / 2)}, TOTALLY_GEODESIC),
    Scenario("latitude-in-sphere2", "circle of latitude theta = pi/4 on the unit sphere",
             f"circle:{_S45}", "sphere2:1", "latitude", {"theta": float(np.pi / 4)},
             NOT_TOTALLY_GEODESIC),
    Scenario("sphere2-in-e3", "unit sphere in Euclidean 3-space, polar-angle chart",
             "sphere2:1", "euclidean:3", "sphere-spherical", {"radius": 1.0},
             NOT_TOTALLY_GEODESIC),
    Scenario("sphere2stereo-in-e3", "unit sphere in Euclidean 3-space, stereographic chart",
             "sphere2stereo:1", "euclidean:3", "sphere-stereographic", {"radius": 1.0},
             NOT_TOTALLY_GEODESIC),
    Scenario("small-sphere-in-sphere3", "level sphere chi = pi/4 of the unit 3-sphere",
             f"sphere2:{_S45}", "sphere3:1", "sphere3-slice", {"chi": float(np.pi / 4)},
             NOT_TOTALLY_GEODESIC),
    Scenario("equatorial-sphere2-in-sphere3", "equatorial great 2-sphere of the unit 3-sphere",
             "sphere2:1", "sphere3:1", "sphere3-slice", {"chi": float(np.pi / 2)},
             TOTALLY_GEODESIC),
    Scenario("clifford-in-sphere3", "Clifford torus in the unit 3-sphere",
             "induced", "sphere3:1", "clifford", {}, NOT_TOTALLY_GEODESIC),
    Scenario("paraboloid-in-e3", "paraboloid z = (x^2 + y^2)/2 in Euclidean 3-space",
             "induced", "euclidean:3", "paraboloid", {"curvature": 1.0}, NOT_TOTALLY_GEODESIC),
    Scenario("helix-in-e3", "unit-radius, unit-pitch helix in Euclidean 3-space",
             f"circle:{float(np.sqrt(2.0))!r}", "euclidean:3", "helix", {"radius": 1.0, "pitch": 1.0},
             NOT_TOTALLY_GEODESIC),
]}


def list_scenarios() -> list[tuple[str, str]]:
    """(name, description) pairs in a fixed order."""
    return [(s.name, s.description) for s in SCENARIOS.values()]


def get_scenario(name: str) -> Scenario:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ScenarioNotFoundError(
            f"unknown scenario {name!r}; run `sasaki list` for the catalog") from None
