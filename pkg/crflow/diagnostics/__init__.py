"""
crflow - Diagnostics
Functionals, identity checks and the linearization probe

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from .functionals import (
    MassEstimate,
    adm_mass,
    asymptotic_flatness_check,
    volume,
    volume_integral,
    yamabe_quotient,
)
from .records import COLUMN_DOCS, TIMESERIES_COLUMNS, DiagnosticsRecord, FrameRecorder
from .identities import (
    curvature_evolution_check,
    mass_derivative_check,
    q_monotonicity_check,
    scaling_check,
    volume_identity_check,
)
from .linearization import SpectrumReport, fd_jacobian_probe

__all__ = [
    'MassEstimate', 'adm_mass', 'asymptotic_flatness_check', 'volume', 'volume_integral', 'yamabe_quotient',
    'COLUMN_DOCS', 'TIMESERIES_COLUMNS', 'DiagnosticsRecord', 'FrameRecorder',
    'curvature_evolution_check', 'mass_derivative_check', 'q_monotonicity_check', 'scaling_check',
    'volume_identity_check',
    'SpectrumReport', 'fd_jacobian_probe',
]
