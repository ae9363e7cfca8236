"""
Flow Configuration and Trajectory Types
Enums, run configuration and recorded states of a flow integration

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .exceptions import ConfigError
from .tensors import CurvatureData, PressureField


class FlowKind(str, Enum):
    CRF = "crf"
    DTCRF = "dtcrf"
    RICCI = "ricci"


class GeometryKind(str, Enum):
    RADIAL_AF = "radial_af"
    HOMOGENEOUS = "homogeneous"


class ReferenceKind(str, Enum):
    EUCLIDEAN = "euclidean"
    INITIAL = "initial"


class PressureSource(str, Enum):
    """
    Right-hand side of the radial pressure solve.

    DEVIATION solves (m-1)Δp + s0·p = -|E|² and leaves any drift of s to be
    monitored. LINEARIZED is an opt-in variant: the source is the discrete
    linearization of s along E with the current s as potential, which holds s
    fixed under the semi-discrete flow.
    """
    DEVIATION = "deviation"
    LINEARIZED = "linearized"


class TerminationStatus(str, Enum):
    COMPLETED = "completed"
    PRESSURE_FAILURE = "pressure_failure"
    NUMERICAL_BREAKDOWN = "numerical_breakdown"
    OUT_OF_DOMAIN = "out_of_domain"


def _enum_value(enum_cls, value, field_name: str):
    try:
        return enum_cls(value)
    except ValueError:
        allowed = [e.value for e in enum_cls]
        raise ConfigError(f"'{value}' is not one of {allowed}", field=field_name)


@dataclass
class FlowConfig:
    """
    Parameters of one flow integration.

    Attributes:
        flow_kind: crf, dtcrf or ricci
        geometry_kind: radial_af or homogeneous
        s0: Target scalar curvature (0 on asymptotically flat grids)
        dt_safety: Fraction of the parabolic step limit, in (0, 1]
        t_end: Final time
        output_stride: Record every output_stride steps
        n_steps: Fixed step count overriding the CFL step when given
        reference_metric: DeTurck reference (euclidean or the initial metric)
        ricci_gauge: Add the DeTurck term to plain Ricci flow
        constraint_tolerance: Admissible |s[g0] - s0| for crf and dtcrf
        pressure_source: Radial pressure right-hand side (deviation, or the opt-in linearized variant)
    """
    flow_kind: FlowKind = FlowKind.CRF
    geometry_kind: GeometryKind = GeometryKind.RADIAL_AF
    s0: float = 0.0
    dt_safety: float = 0.2
    t_end: float = 0.1
    output_stride: int = 1
    n_steps: Optional[int] = None
    reference_metric: ReferenceKind = ReferenceKind.EUCLIDEAN
    ricci_gauge: bool = False
    constraint_tolerance: float = 1e-6
    pressure_source: PressureSource = PressureSource.DEVIATION

    def __post_init__(self):
        self.flow_kind = _enum_value(FlowKind, self.flow_kind, 'flow.flow_kind')
        self.geometry_kind = _enum_value(GeometryKind, self.geometry_kind, 'geometry_kind')
        self.reference_metric = _enum_value(ReferenceKind, self.reference_metric, 'flow.reference_metric')
        self.pressure_source = _enum_value(PressureSource, self.pressure_source, 'flow.pressure_source')
        self.validate()

    def validate(self):
        """
        Raises:
            ConfigError: If any field is out of range
        """
        if not 0 < self.dt_safety <= 1:
            raise ConfigError(f"dt_safety must lie in (0, 1], got {self.dt_safety}", field='flow.dt_safety')
        if not self.t_end > 0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}", field='flow.t_end')
        if int(self.output_stride) != self.output_stride or self.output_stride < 1:
            raise ConfigError(f"output_stride must be a positive integer, got {self.output_stride}",
                              field='flow.output_stride')
        if self.n_steps is not None and (int(self.n_steps) != self.n_steps or self.n_steps < 1):
            raise ConfigError(f"n_steps must be a positive integer, got {self.n_steps}",
                              field='flow.n_steps')
        if self.constraint_tolerance <= 0:
            raise ConfigError("constraint_tolerance must be positive", field='flow.constraint_tolerance')
        if self.geometry_kind is GeometryKind.RADIAL_AF and self.s0 != 0:
            raise ConfigError(
                f"Asymptotically flat runs require a scalar-flat target s0 = 0, got {self.s0}",
                field='flow.s0'
            )

    @property
    def gauged(self) -> bool:
        return self.flow_kind is FlowKind.DTCRF or (self.flow_kind is FlowKind.RICCI and self.ricci_gauge)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key, value in data.items():
            if isinstance(value, Enum):
                data[key] = value.value
        return data


@dataclass(frozen=True)
class FlowState:
    """The pair (g(t), p(t)) with the curvature it was computed from."""
    t: float
    metric: Any
    pressure: PressureField
    curvature: CurvatureData
    gauge_field: Union[np.ndarray, float, None] = None
    step: int = 0


@dataclass
class FlowTrajectory:
    """Time-ordered states of one run and the diagnostics recorded with them."""
    config: FlowConfig
    states: List[FlowState] = field(default_factory=list)
    diagnostics: List[Any] = field(default_factory=list)
    termination: TerminationStatus = TerminationStatus.COMPLETED
    message: str = ""
    invertibility: Optional[Dict[str, Any]] = None

    def append(self, state: FlowState, record: Any = None):
        if self.states and state.t <= self.states[-1].t:
            raise ValueError(f"Trajectory times must increase: {state.t} after {self.states[-1].t}")
        self.states.append(state)
        if record is not None:
            self.diagnostics.append(record)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    @property
    def completed(self) -> bool:
        return self.termination is TerminationStatus.COMPLETED

    def __len__(self) -> int:
        return len(self.states)

    def __repr__(self) -> str:
        return (f"<FlowTrajectory(flow={self.config.flow_kind.value}, frames={len(self.states)}, "
                f"termination={self.termination.value})>")
