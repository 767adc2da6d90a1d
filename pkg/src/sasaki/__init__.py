"""Tangent-bundle geometry in coordinates and numerical checks of how the
Sasaki metric behaves under isometric immersions."""

from .bundle import (HVSplit, TangentPoint, TTVector, VerticalPair, canonical_flip,
                     connection_map, covdev_via_connection, psi, sasaki_metric, tg_tilde,
                     vertical_lift, whitney_metric, xi, xi_inverse)
from .charts import manifold
from .core import (ChartManifold, check_levi_civita, christoffel_at, covariant_derivative,
                   metric_at)
from .errors import *  # noqa: F401,F403
from .immersion import (Immersion, check_cstar, check_vsas, double_pushforward,
                        induced_metric, is_totally_geodesic, make_immersion, pullback_sasaki,
                        pushforward, second_fundamental_form, theorem_residual)
from .report import VerificationReport, emit_report
from .runner import ScenarioSpec, run_scenario
from .scenarios import get_scenario, list_scenarios

__version__ = "0.1.0"
