"""Virtual Prytz (hatchet) planimeter.

A rod of length ell drags a chisel edge behind a tracer point; the chisel's
sideways slip is forbidden, so tracing a closed curve rotates the rod by a
holonomy that lives in SU(1,1). This package simulates the instrument,
computes and classifies loop holonomies, checks the closed-form parallelogram
criteria, and reproduces the classical moment-series error analysis.
"""

__version__ = "0.1.0"

from .errors import InputError, NumericError, PrytzError
from .geom2d import (PlanarPath, Point2, RegionMoments, centroid, moments_about,
                     resample, second_moment_about, signed_area)
from .dynamics import (IdentityReport, PlanimeterState, TraceResult,
                       area_identity_report, closed_tractrix_residual, integrate,
                       standard_tractrix, trace_loop)
from .su11 import (HolonomyClass, HolonomyKind, SU11Element, Su11Algebra, classify,
                   compose, develop_to_disk, exp_algebra, mobius_apply, multiplier)
from .holonomy import (BalancePoint, ConnectionParams, LoopHolonomy, balance_point,
                       curvature_probe, figure_eight_holonomy, holonomy_curve,
                       holonomy_polygon, omega, segment_transport, winding_number)
from .menzin import (MenzinReport, ParallelogramSpec, attracting_condition,
                     circle_closed_tractrix, menzin_minimum_check, menzin_scan,
                     parallelogram_fixed_points, parallelogram_holonomy,
                     parallelogram_multipliers)
from .estimator import (HillPrediction, OrderStudy, error_order_study, hill_predict,
                        hill_rate, measure_once, measure_two_directions)

__all__ = [name for name in dir() if not name.startswith("_")]
