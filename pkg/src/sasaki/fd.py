"""Central finite differences used wherever analytic derivatives are missing."""

import numpy as np

from .tolerances import FD_NESTED_STEP, FD_STEP, STENCIL5_STEP, step_for


def jacobian(f, x, rel_step=FD_STEP):
    """Jacobian of ``f`` at ``x``; output shape is ``f(x).shape + (n,)``."""
    x = np.asarray(x, dtype=float)
    h = step_for(x, rel_step)
    cols = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        cols.append((np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2 * h))
    return np.stack(cols, axis=-1)


def hessian(f, x, rel_step=FD_NESTED_STEP):
    """Second derivatives ``H[..., i, j] = d_i d_j f`` by nested central differences."""
    x = np.asarray(x, dtype=float)
    h = step_for(x, rel_step)
    n = x.size
    f0 = np.asarray(f(x))
    out = np.zeros(f0.shape + (n, n))
    eye = np.eye(n) * h
    for i in range(n):
        for j in range(i, n):
            if i == j:
                val = (np.asarray(f(x + 2 * eye[i])) - 2 * f0
                       + np.asarray(f(x - 2 * eye[i]))) / (4 * h * h)
            else:
                val = (np.asarray(f(x + eye[i] + eye[j]))
                       - np.asarray(f(x + eye[i] - eye[j]))
                       - np.asarray(f(x - eye[i] + eye[j]))
                       + np.asarray(f(x - eye[i] - eye[j]))) / (4 * h * h)
            out[..., i, j] = val
            out[..., j, i] = val
    return out


def derivative5(f, h):
    """Five-point central difference at ``t = 0``; ``f`` may be array valued."""
    # differences first, so a constant gives exactly zero
    near = np.asarray(f(h)) - np.asarray(f(-h))
    far = np.asarray(f(2 * h)) - np.asarray(f(-2 * h))
    return (8 * near - far) / (12 * h)


def directional(f, x, d, rel_step=STENCIL5_STEP):
    """d/dt f(x + t d) at 0 by the five-point stencil.

    The stencil differs from :func:`jacobian`, so the two give independent
    estimates of the same derivative.
    """
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    h = step_for(x, rel_step) / max(1.0, float(np.max(np.abs(d))) if d.size else 1.0)
    return derivative5(lambda t: f(x + t * d), h)
