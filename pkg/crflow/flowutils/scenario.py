"""
Scenario Documents
Parsing, validation and schema of JSON run descriptions

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com

A scenario document has the sections

    name, description, geometry_kind, initial_data, grid, flow, diagnostics, mass_radii

Unknown keys are rejected with their dotted path; syntax errors carry the line
number. Missing values are filled from FIELD_TABLE (or from the runner
properties for the crflow.default.* keys).
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Tuple, Union
import json
import logging
import os

from ..flowcore.exceptions import ConfigError, CRFlowError
from ..flowcore.flow_types import (
    FlowConfig,
    FlowKind,
    GeometryKind,
    PressureSource,
    ReferenceKind,
)
from ..flowcore.geometry_factory import GeometryFactory
from ..geometries import initial_data
from ..geometries.radial import InnerClosure, build_radial_grid

logger = logging.getLogger(__name__)


class FieldSpec(NamedTuple):
    kind: str                      # number, integer, boolean, string, number_list
    default: Any
    description: str
    choices: Tuple[str, ...] = ()
    nullable: bool = False


def _choices(enum_cls) -> Tuple[str, ...]:
    return tuple(e.value for e in enum_cls)


FIELD_TABLE: Dict[str, Dict[str, FieldSpec]] = {
    'grid': {
        'rho_min': FieldSpec('number', 0.01, 'inner radius (defaults to the throat for throat closures)'),
        'rho_max': FieldSpec('number', 1000.0, 'outer radius'),
        'n_nodes': FieldSpec('integer', 256, 'number of log-spaced nodes'),
        'dimension': FieldSpec('integer', 3, 'manifold dimension m'),
    },
    'flow': {
        'flow_kind': FieldSpec('string', 'crf', 'flow to integrate', _choices(FlowKind)),
        's0': FieldSpec('number', 0.0, 'target scalar curvature (0 for radial_af)'),
        'dt_safety': FieldSpec('number', 0.2, 'fraction of the parabolic step limit'),
        't_end': FieldSpec('number', 0.1, 'final time (exclusive with target_steps)'),
        'target_steps': FieldSpec('integer', None, 'step count; t_end = target_steps x CFL step of g0',
                                  nullable=True),
        'n_steps': FieldSpec('integer', None, 'fixed step count for a given t_end', nullable=True),
        'output_stride': FieldSpec('integer', 1, 'record every output_stride steps'),
        'reference_metric': FieldSpec('string', 'euclidean', 'DeTurck reference', _choices(ReferenceKind)),
        'ricci_gauge': FieldSpec('boolean', False, 'add the DeTurck term to plain Ricci flow'),
        'constraint_tolerance': FieldSpec('number', 1e-6, 'admissible |s[g0] - s0|'),
        'pressure_source': FieldSpec('string', 'deviation',
                                     'radial pressure source: -|E|^2, or the opt-in linearized variant',
                                     _choices(PressureSource)),
    },
    'diagnostics': {
        'identities': FieldSpec('boolean', True, 'run the identity checks into summary.json'),
        'frames': FieldSpec('boolean', False, 'write frames.json with metric profiles'),
        'gauge_pullback': FieldSpec('boolean', False, 'pull a dtcrf run back and report the pulled-back mass'),
        'jacobian_probe': FieldSpec('boolean', False, 'spectrum of the linearized dtcrf operator at g0'),
    },
}

INITIAL_DATA_TABLE: Dict[str, Dict[str, FieldSpec]] = {
    'flat': {
        'closure': FieldSpec('string', 'reflect', 'inner closure', _choices(InnerClosure)),
    },
    'schwarzschild_conformal': {
        'A0': FieldSpec('number', 0.1, 'coefficient of w = 1 + A0/(2 rho^(m-2))'),
        'closure': FieldSpec('string', 'throat', 'inner closure', _choices(InnerClosure)),
    },
    'perturbed_schwarzschild': {
        'A0': FieldSpec('number', 0.1, 'Schwarzschild coefficient; the grid starts at the throat'),
        'amplitude': FieldSpec('number', 0.1, 'height of the ln B bump'),
        'center': FieldSpec('number', 1.0, 'radius of the bump centre'),
        'width': FieldSpec('number', 0.5, 'width in ln rho'),
    },
    'injected_tail': {
        'amplitude': FieldSpec('number', 0.1, 'tail coefficient'),
        'power': FieldSpec('number', 0.25, 'tail decay power'),
        'tau': FieldSpec('number', None, 'claimed decay order', nullable=True),
    },
    'round': {
        'scale': FieldSpec('number', 1.0, 'multiple of the unit round metric'),
    },
    'squashed': {
        'triple': FieldSpec('number_list', [1.0, 1.0, 2.0], 'frame coefficients (g1, g2, g3)'),
        'lambdas': FieldSpec('number_list', [2.0, 2.0, 2.0], 'Milnor structure constants'),
    },
}

RADIAL_DATA = ('flat', 'schwarzschild_conformal', 'perturbed_schwarzschild', 'injected_tail')
HOMOGENEOUS_DATA = ('round', 'squashed')

TOP_LEVEL = ('name', 'description', 'geometry_kind', 'initial_data', 'grid', 'flow', 'diagnostics', 'mass_radii')

PROPERTY_DEFAULTS = {
    ('grid', 'n_nodes'): ('crflow.default.n_nodes', int),
    ('flow', 'dt_safety'): ('crflow.default.dt_safety', float),
    ('flow', 't_end'): ('crflow.default.t_end', float),
}


@dataclass(frozen=True)
class GridSpec:
    rho_min: float
    rho_max: float
    n_nodes: int
    dimension: int = 3


@dataclass(frozen=True)
class DiagnosticsSpec:
    identities: bool = True
    frames: bool = False
    gauge_pullback: bool = False
    jacobian_probe: bool = False


@dataclass
class Scenario:
    """
    A fully validated run description.

    Attributes:
        name: Scenario name (also the output subdirectory)
        geometry_kind: Geometry class of the run
        initial_data: Initial-data kind and its parameters
        grid: Radial grid (None for homogeneous runs)
        flow: Flow configuration
        diagnostics: Diagnostics toggles
        mass_radii: Sphere radii of the mass ladder (None for the default ladder)
        target_steps: Step count fixing t_end from the CFL step of g0
        description: Free text
    """
    name: str
    geometry_kind: GeometryKind
    initial_data: Dict[str, Any]
    grid: Optional[GridSpec]
    flow: FlowConfig
    diagnostics: DiagnosticsSpec = field(default_factory=DiagnosticsSpec)
    mass_radii: Optional[Tuple[float, ...]] = None
    target_steps: Optional[int] = None
    description: str = ""


# -- field checking ----------------------------------------------------------


def _line_of(text: Optional[str], key: str) -> Optional[int]:
    if not text:
        return None
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return number
    return None


def _coerce(spec: FieldSpec, value: Any, path: str, text: Optional[str]) -> Any:
    line = _line_of(text, path.rsplit('.', 1)[-1])
    if value is None:
        if spec.nullable:
            return None
        raise ConfigError("must not be null", field=path, line=line)
    if spec.kind == 'number':
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"expected a number, got {value!r}", field=path, line=line)
        return float(value)
    if spec.kind == 'integer':
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"expected an integer, got {value!r}", field=path, line=line)
        return int(value)
    if spec.kind == 'boolean':
        if not isinstance(value, bool):
            raise ConfigError(f"expected true or false, got {value!r}", field=path, line=line)
        return value
    if spec.kind == 'number_list':
        if not isinstance(value, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            raise ConfigError(f"expected a list of numbers, got {value!r}", field=path, line=line)
        return [float(v) for v in value]
    if not isinstance(value, str):
        raise ConfigError(f"expected a string, got {value!r}", field=path, line=line)
    if spec.choices and value not in spec.choices:
        raise ConfigError(f"'{value}' is not one of {list(spec.choices)}", field=path, line=line)
    return value


def _section(document: Mapping[str, Any], name: str, table: Dict[str, FieldSpec], text: Optional[str],
             defaults: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    raw = document.get(name)
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("expected an object", field=name, line=_line_of(text, name))
    unknown = sorted(set(raw) - set(table))
    if unknown:
        raise ConfigError("unknown key", field=f"{name}.{unknown[0]}", line=_line_of(text, unknown[0]))
    values = {}
    for key, spec in table.items():
        if key in raw:
            values[key] = _coerce(spec, raw[key], f"{name}.{key}", text)
        else:
            values[key] = (defaults or {}).get(key, spec.default)
    return values


def _property_defaults(properties) -> Dict[str, Dict[str, Any]]:
    result: Dict[str, Dict[str, Any]] = {}
    if properties is None:
        return result
    for (section, key), (prop, cast) in PROPERTY_DEFAULTS.items():
        value = properties.get_property(prop)
        if value is not None:
            try:
                result.setdefault(section, {})[key] = cast(value)
            except ValueError:
                logger.warning(f"Ignoring non-numeric property {prop}={value!r}")
    return result


# -- parsing -----------------------------------------------------------------


def _load_document(source: Union[str, os.PathLike, Mapping[str, Any]]) -> Tuple[Dict[str, Any], Optional[str]]:
    if isinstance(source, Mapping):
        return dict(source), None
    text = str(source)
    if not text.lstrip().startswith('{'):
        if not os.path.exists(text):
            raise ConfigError(f"Scenario file not found: {text}")
        with open(text, 'r', encoding='utf-8') as f:
            text = f.read()
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON: {e.msg}", line=e.lineno) from e
    if not isinstance(document, dict):
        raise ConfigError("Scenario document must be a JSON object", line=1)
    return document, text


def parse_config(source: Union[str, os.PathLike, Mapping[str, Any]], properties=None) -> Scenario:
    """
    Parse and validate a scenario.

    Args:
        source: Path to a JSON file, inline JSON text, or an already decoded mapping
        properties: Optional ConfigLoader supplying crflow.default.* values

    Raises:
        ConfigError: With the dotted field path and, for text input, the line
    """
    document, text = _load_document(source)
    unknown = sorted(set(document) - set(TOP_LEVEL))
    if unknown:
        raise ConfigError("unknown key", field=unknown[0], line=_line_of(text, unknown[0]))

    name = document.get('name')
    if not isinstance(name, str) or not name.strip():
        raise ConfigError("scenario needs a non-empty name", field='name', line=_line_of(text, 'name'))
    description = document.get('description', "")
    if not isinstance(description, str):
        raise ConfigError("expected a string", field='description', line=_line_of(text, 'description'))

    raw_kind = document.get('geometry_kind', GeometryKind.RADIAL_AF.value)
    if raw_kind not in _choices(GeometryKind):
        raise ConfigError(f"'{raw_kind}' is not one of {list(_choices(GeometryKind))}",
                          field='geometry_kind', line=_line_of(text, 'geometry_kind'))
    geometry_kind = GeometryKind(raw_kind)

    data = _initial_data(document, geometry_kind, text)
    defaults = _property_defaults(properties)
    grid = _grid(document, geometry_kind, data, text, defaults.get('grid'))

    flow_values = _section(document, 'flow', FIELD_TABLE['flow'], text, defaults.get('flow'))
    raw_flow = document.get('flow') or {}
    target_steps = flow_values.pop('target_steps')
    if target_steps is not None and 't_end' in raw_flow:
        raise ConfigError("give either t_end or target_steps, not both", field='flow.target_steps',
                          line=_line_of(text, 'target_steps'))
    if target_steps is not None and target_steps < 1:
        raise ConfigError("target_steps must be positive", field='flow.target_steps',
                          line=_line_of(text, 'target_steps'))
    try:
        flow = FlowConfig(geometry_kind=geometry_kind, **flow_values)
    except ConfigError as e:
        if e.line is not None or not e.field:
            raise
        raise ConfigError(e.message, field=e.field, line=_line_of(text, e.field.rsplit('.', 1)[-1])) from e

    diagnostics = DiagnosticsSpec(**_section(document, 'diagnostics', FIELD_TABLE['diagnostics'], text))
    if diagnostics.gauge_pullback and not flow.gauged:
        raise ConfigError("gauge_pullback needs a gauged flow (dtcrf, or ricci with ricci_gauge)",
                          field='diagnostics.gauge_pullback', line=_line_of(text, 'gauge_pullback'))

    mass_radii = document.get('mass_radii')
    if mass_radii is not None:
        mass_radii = _coerce(FieldSpec('number_list', None, ''), mass_radii, 'mass_radii', text)
        if geometry_kind is not GeometryKind.RADIAL_AF:
            raise ConfigError("mass radii apply to radial_af runs", field='mass_radii',
                              line=_line_of(text, 'mass_radii'))
        if len(mass_radii) < 3:
            raise ConfigError("at least 3 radii are needed", field='mass_radii', line=_line_of(text, 'mass_radii'))
        mass_radii = tuple(mass_radii)

    scenario = Scenario(name=name, geometry_kind=geometry_kind, initial_data=data, grid=grid, flow=flow,
                        diagnostics=diagnostics, mass_radii=mass_radii, target_steps=target_steps,
                        description=description)
    logger.debug(f"Parsed scenario '{name}' ({geometry_kind.value}, {flow.flow_kind.value})")
    return scenario


def _initial_data(document: Mapping[str, Any], geometry_kind: GeometryKind, text: Optional[str]) -> Dict[str, Any]:
    raw = document.get('initial_data')
    if not isinstance(raw, dict) or 'kind' not in raw:
        raise ConfigError("initial_data needs a 'kind'", field='initial_data', line=_line_of(text, 'initial_data'))
    kind = raw['kind']
    allowed = RADIAL_DATA if geometry_kind is GeometryKind.RADIAL_AF else HOMOGENEOUS_DATA
    if kind not in allowed:
        raise ConfigError(f"'{kind}' is not {geometry_kind.value} initial data; expected one of {list(allowed)}",
                          field='initial_data.kind', line=_line_of(text, 'kind'))
    params = dict(raw)
    params.pop('kind')
    values = _section({'initial_data': params}, 'initial_data', INITIAL_DATA_TABLE[kind], text)
    values['kind'] = kind
    return values


def _grid(document: Mapping[str, Any], geometry_kind: GeometryKind, data: Dict[str, Any],
          text: Optional[str], defaults: Optional[Dict[str, Any]]) -> Optional[GridSpec]:
    if geometry_kind is GeometryKind.HOMOGENEOUS:
        if document.get('grid') is not None:
            raise ConfigError("homogeneous runs take no grid", field='grid', line=_line_of(text, 'grid'))
        return None
    values = _section(document, 'grid', FIELD_TABLE['grid'], text, defaults)
    raw = document.get('grid') or {}
    throat = data['kind'] == 'perturbed_schwarzschild' or (
        data['kind'] == 'schwarzschild_conformal' and data['closure'] == InnerClosure.THROAT.value)
    if throat and 'rho_min' not in raw:
        values['rho_min'] = initial_data.throat_radius(data['A0'], values['dimension'])
    spec = GridSpec(**values)
    try:
        build_radial_grid(spec.rho_min, spec.rho_max, spec.n_nodes, spec.dimension)
    except CRFlowError as e:
        raise ConfigError(str(e), field='grid', line=_line_of(text, 'grid')) from e
    return spec


# -- output ------------------------------------------------------------------


def scenario_to_dict(scenario: Scenario) -> Dict[str, Any]:
    """The document that parses back to the same scenario (defaults included)."""
    flow = scenario.flow.to_dict()
    flow.pop('geometry_kind')
    if scenario.target_steps is not None:
        flow.pop('t_end')
    flow['target_steps'] = scenario.target_steps
    document = {
        'name': scenario.name,
        'description': scenario.description,
        'geometry_kind': scenario.geometry_kind.value,
        'initial_data': dict(scenario.initial_data),
        'grid': None if scenario.grid is None else {
            'rho_min': scenario.grid.rho_min, 'rho_max': scenario.grid.rho_max,
            'n_nodes': scenario.grid.n_nodes, 'dimension': scenario.grid.dimension,
        },
        'flow': flow,
        'diagnostics': {
            'identities': scenario.diagnostics.identities,
            'frames': scenario.diagnostics.frames,
            'gauge_pullback': scenario.diagnostics.gauge_pullback,
            'jacobian_probe': scenario.diagnostics.jacobian_probe,
        },
        'mass_radii': None if scenario.mass_radii is None else list(scenario.mass_radii),
    }
    return document


def _schema_property(spec: FieldSpec) -> Dict[str, Any]:
    types = {'number': 'number', 'integer': 'integer', 'boolean': 'boolean', 'string': 'string'}
    if spec.kind == 'number_list':
        prop: Dict[str, Any] = {'type': 'array', 'items': {'type': 'number'}}
    else:
        prop = {'type': [types[spec.kind], 'null'] if spec.nullable else types[spec.kind]}
    if spec.choices:
        prop['enum'] = list(spec.choices)
    prop['default'] = spec.default
    prop['description'] = spec.description
    return prop


def _schema_object(table: Dict[str, FieldSpec]) -> Dict[str, Any]:
    return {
        'type': 'object',
        'additionalProperties': False,
        'properties': {key: _schema_property(spec) for key, spec in table.items()},
    }


def emit_schema() -> Dict[str, Any]:
    """JSON Schema (draft-07) of scenario documents."""
    variants = []
    for kind, table in INITIAL_DATA_TABLE.items():
        variant = _schema_object(table)
        variant['properties']['kind'] = {'const': kind}
        variant['required'] = ['kind']
        variants.append(variant)
    return {
        '$schema': 'http://json-schema.org/draft-07/schema#',
        'title': 'crflow scenario',
        'type': 'object',
        'additionalProperties': False,
        'required': ['name', 'initial_data'],
        'properties': {
            'name': {'type': 'string'},
            'description': {'type': 'string', 'default': ''},
            'geometry_kind': {'type': 'string', 'enum': list(_choices(GeometryKind)),
                              'default': GeometryKind.RADIAL_AF.value},
            'initial_data': {'oneOf': variants},
            'grid': {'oneOf': [_schema_object(FIELD_TABLE['grid']), {'type': 'null'}]},
            'flow': _schema_object(FIELD_TABLE['flow']),
            'diagnostics': _schema_object(FIELD_TABLE['diagnostics']),
            'mass_radii': {'type': ['array', 'null'], 'items': {'type': 'number'}, 'minItems': 3},
        },
    }


def list_scenarios(loader=None) -> List[Dict[str, str]]:
    """Name, geometry class and description of every built-in scenario."""
    if loader is None:
        from .config_loader import ConfigLoader
        loader = ConfigLoader()
    entries = []
    for name, document in loader.get_all_scenarios().items():
        entries.append({
            'name': name,
            'geometry_kind': document.get('geometry_kind', GeometryKind.RADIAL_AF.value),
            'description': document.get('description', ''),
        })
    return entries


def load_scenario(name_or_path: str, loader=None) -> Scenario:
    """A registered scenario by name, or a scenario file / inline document."""
    if loader is None:
        from .config_loader import ConfigLoader
        loader = ConfigLoader()
    document = loader.get_scenario(name_or_path)
    if document is not None:
        return parse_config(document, loader)
    return parse_config(name_or_path, loader)


# -- construction ------------------------------------------------------------


def build_initial_metric(scenario: Scenario):
    """
    Raises:
        ConfigError: If the initial-data parameters are rejected by the constructor
    """
    data = scenario.initial_data
    kind = data['kind']
    try:
        if kind == 'round':
            return initial_data.round_homogeneous(data['scale'])
        if kind == 'squashed':
            return initial_data.squashed_homogeneous(tuple(data['triple']), tuple(data['lambdas']))

        spec = scenario.grid
        grid = build_radial_grid(spec.rho_min, spec.rho_max, spec.n_nodes, spec.dimension)
        if kind == 'flat':
            return initial_data.flat(grid, InnerClosure(data['closure']))
        if kind == 'schwarzschild_conformal':
            return initial_data.schwarzschild_conformal(grid, data['A0'], InnerClosure(data['closure']))
        if kind == 'perturbed_schwarzschild':
            return initial_data.perturbed_schwarzschild(grid, data['A0'], data['amplitude'],
                                                        data['center'], data['width'])
        return initial_data.injected_tail(grid, data['amplitude'], data['power'], data['tau'])
    except (ValueError, ArithmeticError) as e:
        raise ConfigError(str(e), field='initial_data') from e


def resolve_flow_config(scenario: Scenario, g0) -> FlowConfig:
    """FlowConfig with t_end fixed by target_steps when the scenario gives it."""
    if scenario.target_steps is None:
        return scenario.flow
    geometry = GeometryFactory().get_geometry(scenario.geometry_kind)
    dt0 = geometry.time_step(g0, scenario.flow.dt_safety)
    return replace(scenario.flow, t_end=scenario.target_steps * dt0, n_steps=scenario.target_steps)
