"""
Scenario Runner
Runs a scenario and writes timeseries.csv, summary.json and frames.json

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Sequence
import csv
import json
import logging
import math
import os

import numpy as np

from ..diagnostics.functionals import total_norm
from ..diagnostics.identities import (
    curvature_evolution_check,
    mass_derivative_check,
    q_monotonicity_check,
    volume_identity_check,
)
from ..diagnostics.linearization import MAX_PROBE_DOF, fd_jacobian_probe
from ..diagnostics.records import COLUMN_DOCS, TIMESERIES_COLUMNS, FrameRecorder
from ..flowcore.exceptions import (
    ConfigError,
    ConstraintViolation,
    CRFlowError,
    NonInvertibleOperator,
    UnsupportedGeometry,
)
from ..flowcore.flow_engine import run_flow
from ..flowcore.flow_types import FlowKind, FlowTrajectory, GeometryKind, TerminationStatus
from ..flowcore.gauge_pullback import gauge_pullback
from ..geometries.homogeneous import HomogeneousMetric
from .scenario import Scenario, build_initial_metric, resolve_flow_config, scenario_to_dict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRESSURE_FAILURE = 3
EXIT_BREAKDOWN = 4

EXIT_CODES = {
    TerminationStatus.COMPLETED: EXIT_OK,
    TerminationStatus.OUT_OF_DOMAIN: EXIT_OK,
    TerminationStatus.PRESSURE_FAILURE: EXIT_PRESSURE_FAILURE,
    TerminationStatus.NUMERICAL_BREAKDOWN: EXIT_BREAKDOWN,
}

FIXED_POINT_TOLERANCE = 1e-10
MASS_BAND = 0.05


@dataclass
class RunResult:
    """Outcome of one scenario run."""
    name: str
    exit_code: int
    out_dir: str
    summary: Dict[str, Any] = field(default_factory=dict)


def _jsonable(value: Any) -> Any:
    """numpy scalars/arrays to Python; NaN and infinities to None."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    return value


def write_json(path: str, payload: Dict[str, Any]):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(_jsonable(payload), f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write('\n')


def _csv_cell(value: Any) -> str:
    if value is None:
        return ''
    return repr(float(value))


def write_timeseries(path: str, records: Sequence) -> None:
    """One row per recorded frame; undefined columns are left empty."""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(TIMESERIES_COLUMNS)
        for record in records:
            row = record.to_row()
            writer.writerow([_csv_cell(row[name]) for name in TIMESERIES_COLUMNS])


def _frame_payload(trajectory: FlowTrajectory) -> Dict[str, Any]:
    frames = []
    for state in trajectory.states:
        g = state.metric
        frame: Dict[str, Any] = {'t': state.t, 'step': state.step, 'p': np.atleast_1d(state.pressure.values)}
        if isinstance(g, HomogeneousMetric):
            frame['coeffs'] = g.coeffs
        else:
            frame.update({'rho': g.nodes, 'A': g.A, 'B': g.B})
        frames.append(frame)
    return {'flow_kind': trajectory.config.flow_kind.value, 'frames': frames}


def _metric_vector(g) -> np.ndarray:
    if isinstance(g, HomogeneousMetric):
        return np.asarray(g.coeffs, dtype=float)
    return np.concatenate([g.A ** 2, g.B ** 2])


def _guarded(reports: Dict[str, Any], name: str, check: Callable[[], Any]):
    try:
        reports[name] = check().to_dict()
    except (CRFlowError, ValueError) as e:
        logger.warning(f"{name} skipped: {e}")
        reports[name] = {'skipped': str(e)}


def _verdicts(scenario: Scenario, trajectory: FlowTrajectory, reports: Dict[str, Any]) -> Dict[str, Any]:
    states = trajectory.states
    records = trajectory.diagnostics
    config = trajectory.config
    verdicts: Dict[str, Any] = {}
    if not states:
        return verdicts

    g0 = _metric_vector(states[0].metric)
    change = max(float(np.max(np.abs(_metric_vector(s.metric) - g0))) for s in states)
    verdicts['fixed_point'] = change <= FIXED_POINT_TOLERANCE
    verdicts['max_metric_change'] = change

    if config.flow_kind is not FlowKind.RICCI and records:
        drift = max(r.constraint_change for r in records)
        verdicts['constraint_preserved'] = drift <= config.constraint_tolerance
        verdicts['max_constraint_change'] = drift

    if scenario.geometry_kind is GeometryKind.RADIAL_AF and records:
        masses = np.array([r.mass for r in records], dtype=float)
        if np.all(np.isfinite(masses)) and masses.size > 1:
            reference = abs(masses[0]) if masses[0] != 0 else 1.0
            verdicts['mass_monotone_decreasing'] = bool(np.all(np.diff(masses) < 0))
            verdicts['mass_constant_within_tol'] = bool(np.max(np.abs(masses - masses[0])) / reference
                                                        <= MASS_BAND)
    if scenario.geometry_kind is GeometryKind.HOMOGENEOUS and records:
        q = np.array([r.Q for r in records], dtype=float)
        if q.size > 1:
            verdicts['q_monotone_increasing'] = bool(np.all(np.diff(q) > 0))

    mass_report = reports.get('mass_derivative', {})
    if 'max_relative_residual' in mass_report and config.flow_kind is not FlowKind.RICCI:
        verdicts['mass_identity_within_tol'] = mass_report['max_relative_residual'] <= MASS_BAND
    return verdicts


def _residual_maxima(trajectory: FlowTrajectory, reports: Dict[str, Any]) -> Dict[str, Any]:
    maxima: Dict[str, Any] = {}
    records = trajectory.diagnostics
    if records:
        maxima['constraint_drift'] = max(r.constraint_drift for r in records)
        maxima['pressure_residual'] = max(float(s.pressure.residual_norm) for s in trajectory.states)
        thetas = [r.theta_check for r in records if r.theta_check is not None]
        maxima['theta_check'] = max(thetas) if thetas else None
    for name, key in (('volume_identity', 'max_residual'), ('mass_derivative', 'max_relative_residual'),
                      ('curvature_evolution', 'max_scalar_residual'),
                      ('curvature_evolution', 'max_ricci_residual'), ('q_monotonicity', 'max_residual')):
        value = reports.get(name, {}).get(key)
        if value is not None:
            maxima[f"{name}.{key}"] = value
    return maxima


def _identity_reports(scenario: Scenario, trajectory: FlowTrajectory) -> Dict[str, Any]:
    reports: Dict[str, Any] = {}
    if len(trajectory) < 3:
        return reports
    flow_kind = trajectory.config.flow_kind
    if flow_kind is FlowKind.CRF:
        _guarded(reports, 'volume_identity', lambda: volume_identity_check(trajectory))
        _guarded(reports, 'curvature_evolution', lambda: curvature_evolution_check(trajectory))
    if scenario.geometry_kind is GeometryKind.RADIAL_AF:
        _guarded(reports, 'mass_derivative', lambda: mass_derivative_check(trajectory, scenario.mass_radii))
    elif flow_kind is FlowKind.CRF and scenario.flow.s0 != 0:
        _guarded(reports, 'q_monotonicity', lambda: q_monotonicity_check(trajectory))
    return reports


def _pullback_report(scenario: Scenario, trajectory: FlowTrajectory) -> Dict[str, Any]:
    recorder = FrameRecorder(scenario.mass_radii)
    pulled = gauge_pullback(trajectory, recorder=recorder)
    report: Dict[str, Any] = {'frames': len(pulled), 'termination': pulled.termination.value,
                              'message': pulled.message}
    if pulled.diagnostics:
        last = pulled.diagnostics[-1]
        report.update({'t': last.t, 'mass': last.mass, 'ric_l2': last.ric_l2})
    return report


def _probe_report(scenario: Scenario, g0) -> Dict[str, Any]:
    size = 3 if isinstance(g0, HomogeneousMetric) else 2 * g0.grid.n_nodes
    if size > MAX_PROBE_DOF:
        return {'skipped': f"{size} unknowns exceed the dense probe limit {MAX_PROBE_DOF}"}
    try:
        return fd_jacobian_probe(g0, scenario.flow.s0).to_dict()
    except (CRFlowError, ValueError, ArithmeticError) as e:
        return {'skipped': str(e)}


def run_scenario(scenario: Scenario, out_root: str) -> RunResult:
    """
    Run one scenario into out_root/<name>/.

    Always leaves summary.json behind, including for rejected initial data.
    Exit codes: 0 success, 2 rejected configuration or initial data,
    3 pressure failure, 4 numerical breakdown.
    """
    out_dir = os.path.join(out_root, scenario.name)
    os.makedirs(out_dir, exist_ok=True)
    summary: Dict[str, Any] = {
        'scenario': scenario.name,
        'config': scenario_to_dict(scenario),
        'columns': dict(COLUMN_DOCS),
    }
    summary_path = os.path.join(out_dir, 'summary.json')

    try:
        g0 = build_initial_metric(scenario)
        config = resolve_flow_config(scenario, g0)
        summary['flow'] = config.to_dict()
        summary['pressure_source'] = config.pressure_source.value
        recorder = FrameRecorder(scenario.mass_radii)
        trajectory = run_flow(config, g0, recorder)
    except (ConfigError, ConstraintViolation, UnsupportedGeometry) as e:
        logger.error(f"Scenario '{scenario.name}' rejected: {e}")
        summary.update({'termination': 'rejected', 'message': str(e), 'exit_code': EXIT_CONFIG})
        write_json(summary_path, summary)
        return RunResult(scenario.name, EXIT_CONFIG, out_dir, summary)
    except NonInvertibleOperator as e:
        logger.error(f"Scenario '{scenario.name}': initial pressure operator not invertible: {e}")
        summary.update({'termination': TerminationStatus.PRESSURE_FAILURE.value, 'message': str(e),
                        'exit_code': EXIT_PRESSURE_FAILURE})
        write_json(summary_path, summary)
        return RunResult(scenario.name, EXIT_PRESSURE_FAILURE, out_dir, summary)

    write_timeseries(os.path.join(out_dir, 'timeseries.csv'), trajectory.diagnostics)
    if scenario.diagnostics.frames:
        write_json(os.path.join(out_dir, 'frames.json'), _frame_payload(trajectory))

    reports = _identity_reports(scenario, trajectory) if scenario.diagnostics.identities else {}
    if scenario.diagnostics.gauge_pullback and trajectory.config.gauged:
        reports['gauge_pullback'] = _pullback_report(scenario, trajectory)
    if scenario.diagnostics.jacobian_probe:
        reports['jacobian_probe'] = _probe_report(scenario, g0)

    exit_code = EXIT_CODES[trajectory.termination]
    final = trajectory.diagnostics[-1].to_dict() if trajectory.diagnostics else {}
    summary.update({
        'termination': trajectory.termination.value,
        'message': trajectory.message,
        'exit_code': exit_code,
        'frames': len(trajectory),
        'final_time': float(trajectory.times[-1]) if len(trajectory) else None,
        'invertibility': trajectory.invertibility,
        'verdicts': _verdicts(scenario, trajectory, reports),
        'residual_maxima': _residual_maxima(trajectory, reports),
        'reports': reports,
        'final': final,
    })
    if len(trajectory) and not isinstance(g0, HomogeneousMetric):
        last = trajectory.states[-1]
        summary['final']['ric_l2_tail_bound'] = total_norm(last.metric, last.curvature.ric_norm_sq).tail_bound
    write_json(summary_path, summary)
    logger.info(f"Scenario '{scenario.name}' finished ({trajectory.termination.value}); outputs in {out_dir}")
    return RunResult(scenario.name, exit_code, out_dir, summary)


def _sweep_worker(scenario: Scenario, out_root: str) -> tuple:
    result = run_scenario(scenario, out_root)
    return result.name, result.exit_code


def run_sweep(scenarios: Sequence[Scenario], out_root: str, max_workers: int = 4) -> List[tuple]:
    """
    Run several scenarios in separate processes, one output directory each.

    Returns:
        (name, exit code) per scenario, in input order

    Raises:
        ConfigError: If two scenarios would write to the same directory
    """
    names = [s.name for s in scenarios]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise ConfigError(f"Sweep scenarios share the output directory '{duplicates[0]}'", field='name')
    with ProcessPoolExecutor(max_workers=max(1, min(max_workers, len(scenarios)))) as pool:
        futures = [pool.submit(_sweep_worker, scenario, out_root) for scenario in scenarios]
        return [future.result() for future in futures]


def sweep_exit_code(results: Sequence[tuple]) -> int:
    """The largest exit code of the sweep (0 when everything succeeded)."""
    return max((code for _, code in results), default=EXIT_OK)
