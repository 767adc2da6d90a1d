"""Tolerance tiers and finite-difference step sizes.

Every numerical check reports the tier it was judged against. The tier
reflects how many layers of differentiation separate the residual from
closed-form data.
"""

import numpy as np

EXACT = "EXACT"
ROUNDOFF = "ROUNDOFF"
ANALYTIC = "ANALYTIC"
ANALYTIC2 = "ANALYTIC2"
FD1 = "FD1"
FD2 = "FD2"

TIERS = {
    EXACT: 0.0,
    ROUNDOFF: 1e-12,
    ANALYTIC: 1e-10,
    # closed forms pushed through a second derivative (Hessians, Christoffels of
    # induced metrics)
    ANALYTIC2: 1e-8,
    FD1: 1e-6,
    FD2: 1e-4,
}

FD_STEP = 1e-5
FD_NESTED_STEP = 1e-4
# five-point stencils used as independent second opinions
STENCIL5_STEP = 5e-5
# stencils must sit this many steps inside the chart
MARGIN_STEPS = 4
COND_CAP = 1e8
SYM_RTOL = 1e-14
BASEPOINT_TOL = 1e-10
CURVE_STEP = 1e-3


def step_for(x, base=FD_STEP):
    """Absolute FD step scaled to the size of ``x``."""
    return base * max(1.0, float(np.max(np.abs(x))) if np.size(x) else 1.0)


def passes(max_residual, tol):
    """Pass rule: strictly below tolerance; an EXACT tier demands zero."""
    if tol == 0.0:
        return max_residual == 0.0
    return max_residual < tol
