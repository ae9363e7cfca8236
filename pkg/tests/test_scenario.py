"""
Tests for scenario documents, runner settings and the scenario runner.
"""

import csv
import json
import os

import numpy as np
import pytest

from crflow.diagnostics.functionals import adm_mass
from crflow.diagnostics.records import TIMESERIES_COLUMNS
from crflow.flowcore.exceptions import ConfigError, NonInvertibleOperator
from crflow.flowcore.flow_types import (
    FlowConfig,
    FlowKind,
    FlowTrajectory,
    GeometryKind,
    PressureSource,
    TerminationStatus,
)
from crflow.flowutils import runner
from crflow.flowutils.config_loader import DEFAULT_OUTPUT_ROOT, ConfigLoader
from crflow.flowutils.runner import run_scenario, run_sweep, sweep_exit_code
from crflow.flowutils.scenario import (
    build_initial_metric,
    emit_schema,
    list_scenarios,
    load_scenario,
    parse_config,
    resolve_flow_config,
    scenario_to_dict,
)
from crflow.geometries.radial import ricci_radial
from crflow.geometries.radial_geometry import RadialGeometry


def flat_document(**flow):
    flow.setdefault('target_steps', 5)
    return {
        'name': 'small_flat',
        'initial_data': {'kind': 'flat'},
        'grid': {'rho_min': 0.01, 'rho_max': 1000.0, 'n_nodes': 32},
        'flow': flow,
    }


def squashed_document(name='small_squashed', steps=4):
    return {
        'name': name,
        'geometry_kind': 'homogeneous',
        'initial_data': {'kind': 'squashed'},
        'flow': {'s0': 4.0, 'dt_safety': 0.05, 'target_steps': steps},
    }


def read_rows(path):
    with open(path, newline='') as f:
        return list(csv.reader(f))


class TestParseConfig:

    def test_defaults(self):
        scenario = parse_config({'name': 'f', 'initial_data': {'kind': 'flat'}})
        assert scenario.geometry_kind is GeometryKind.RADIAL_AF
        assert scenario.grid.n_nodes == 256
        assert scenario.flow.dt_safety == 0.2
        assert scenario.flow.t_end == 0.1
        assert scenario.flow.flow_kind is FlowKind.CRF
        assert scenario.initial_data == {'kind': 'flat', 'closure': 'reflect'}

    def test_throat_sets_inner_radius(self):
        scenario = parse_config({'name': 's', 'initial_data': {'kind': 'schwarzschild_conformal', 'A0': 0.2}})
        assert scenario.grid.rho_min == pytest.approx(0.1)

    def test_radial_target_must_vanish(self):
        with pytest.raises(ConfigError) as info:
            parse_config(flat_document(s0=1.0))
        assert info.value.field == 'flow.s0'

    def test_unknown_key_reports_path_and_line(self):
        text = '{"name": "x", "initial_data": {"kind": "flat"}, "flow": {"dt": 0.1}}'
        with pytest.raises(ConfigError) as info:
            parse_config(text)
        assert info.value.field == 'flow.dt'
        assert info.value.line == 1

    def test_syntax_error_reports_line(self):
        text = '{\n  "name": "x",\n  "flow": {,}\n}'
        with pytest.raises(ConfigError) as info:
            parse_config(text)
        assert info.value.line == 3

    def test_field_error_reports_line(self):
        text = '{\n  "name": "x",\n  "initial_data": {"kind": "flat"},\n  "flow": {"dt_safety": 2.0}\n}'
        with pytest.raises(ConfigError) as info:
            parse_config(text)
        assert info.value.field == 'flow.dt_safety'
        assert info.value.line == 4

    def test_t_end_and_target_steps_exclude_each_other(self):
        with pytest.raises(ConfigError) as info:
            parse_config(flat_document(t_end=1.0))
        assert info.value.field == 'flow.target_steps'

    def test_homogeneous_runs_take_no_grid(self):
        document = squashed_document()
        document['grid'] = {'n_nodes': 64}
        with pytest.raises(ConfigError) as info:
            parse_config(document)
        assert info.value.field == 'grid'

    def test_initial_data_must_match_geometry(self):
        document = squashed_document()
        document['initial_data'] = {'kind': 'flat'}
        with pytest.raises(ConfigError) as info:
            parse_config(document)
        assert info.value.field == 'initial_data.kind'

    @pytest.mark.parametrize("document,field", [
        ({'initial_data': {'kind': 'flat'}}, 'name'),
        ({'name': 'x', 'initial_data': {'kind': 'flat'}, 'grid': {'n_nodes': 'many'}}, 'grid.n_nodes'),
        ({'name': 'x', 'initial_data': {'kind': 'flat'}, 'flow': {'flow_kind': 'mean'}}, 'flow.flow_kind'),
        ({'name': 'x', 'initial_data': {'kind': 'flat'}, 'mass_radii': [1.0, 10.0]}, 'mass_radii'),
        ({'name': 'x', 'initial_data': {'kind': 'flat'}, 'diagnostics': {'gauge_pullback': True}},
         'diagnostics.gauge_pullback'),
        ({'name': 'x', 'initial_data': {'kind': 'flat'}, 'extra': 1}, 'extra'),
    ])
    def test_invalid_fields(self, document, field):
        with pytest.raises(ConfigError) as info:
            parse_config(document)
        assert info.value.field == field

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            parse_config(str(tmp_path / 'missing.json'))

    def test_property_defaults(self, clean_settings, tmp_path):
        clean_settings.apply_overrides(['--crflow.default.n_nodes=64'])
        scenario = parse_config({'name': 'f', 'initial_data': {'kind': 'flat'}}, ConfigLoader(str(tmp_path)))
        assert scenario.grid.n_nodes == 64


class TestBuiltInScenarios:

    @pytest.fixture
    def loader(self, clean_settings):
        return ConfigLoader()

    def test_registry(self, loader):
        names = [entry['name'] for entry in list_scenarios(loader)]
        assert len(names) >= 7
        for name in ('flat', 'schwarzschild_conformal', 'perturbed_af', 'squashed_homogeneous',
                     'round_homogeneous', 'ricci_comparison'):
            assert name in names

    def test_documents_round_trip(self, loader):
        for name in loader.list_scenarios():
            scenario = load_scenario(name, loader)
            document = json.loads(json.dumps(scenario_to_dict(scenario)))
            assert parse_config(document) == scenario, name

    def test_initial_metrics_build(self, loader):
        for name in loader.list_scenarios():
            scenario = load_scenario(name, loader)
            g0 = build_initial_metric(scenario)
            config = resolve_flow_config(scenario, g0)
            assert config.n_steps == scenario.target_steps

    def test_perturbed_af_is_a_massive_throat(self, loader):
        scenario = load_scenario('perturbed_af', loader)
        g0 = build_initial_metric(scenario)
        assert scenario.initial_data['kind'] == 'perturbed_schwarzschild'
        assert scenario.grid.rho_min == pytest.approx(0.05)
        assert g0.closure.value == 'throat'
        assert adm_mass(g0).mass == pytest.approx(0.4, rel=0.01)
        assert np.max(np.abs(ricci_radial(g0).ric.components)) > 1.0
        assert scenario.flow.pressure_source is PressureSource.DEVIATION

    def test_schema_is_json(self):
        schema = json.loads(json.dumps(emit_schema()))
        assert schema['required'] == ['name', 'initial_data']
        assert set(schema['properties']['flow']['properties']) >= {'flow_kind', 's0', 'target_steps'}
        kinds = [v['properties']['kind']['const'] for v in schema['properties']['initial_data']['oneOf']]
        assert 'schwarzschild_conformal' in kinds and 'squashed' in kinds


class TestResolveFlowConfig:

    def test_target_steps_fix_the_end_time(self):
        scenario = parse_config(flat_document())
        g0 = build_initial_metric(scenario)
        config = resolve_flow_config(scenario, g0)
        dt0 = RadialGeometry().time_step(g0, 0.2)
        assert config.n_steps == 5
        assert config.t_end == pytest.approx(5 * dt0)

    def test_t_end_passes_through(self):
        scenario = parse_config({'name': 'f', 'initial_data': {'kind': 'flat'}, 'flow': {'t_end': 0.5}})
        assert resolve_flow_config(scenario, build_initial_metric(scenario)) is scenario.flow


class TestSettings:

    def test_precedence(self, clean_settings, monkeypatch):
        clean_settings.set('CRFLOW_OUT', 'from_file')
        assert clean_settings.get_source('CRFLOW_OUT') == 'file'
        monkeypatch.setenv('CRFLOW_OUT', 'from_env')
        assert clean_settings.get('CRFLOW_OUT') == 'from_env'
        remaining = clean_settings.apply_overrides(['run', '--CRFLOW_OUT=from_cli', '--out=DIR'])
        assert remaining == ['run', '--out=DIR']
        assert clean_settings.get('CRFLOW_OUT') == 'from_cli'
        assert clean_settings.get_source('CRFLOW_OUT') == 'override'

    def test_typed_getters(self, clean_settings):
        clean_settings.set('crflow.a', '3')
        clean_settings.set('crflow.b', 'on')
        clean_settings.set('crflow.c', 'x, y')
        assert clean_settings.get_int('crflow.a') == 3
        assert clean_settings.get_float('crflow.b', 1.5) == 1.5
        assert clean_settings.get_bool('crflow.b')
        assert clean_settings.get_list('crflow.c') == ['x', 'y']

    def test_properties_file(self, clean_settings, tmp_path):
        path = tmp_path / 'application.properties'
        path.write_text('# comment\ncrflow.default.n_nodes = "128"\n')
        loader = ConfigLoader(str(tmp_path))
        assert loader.get_int_property('crflow.default.n_nodes') == 128
        assert loader.list_scenarios() == []

    def test_output_root(self, clean_settings, tmp_path, monkeypatch):
        loader = ConfigLoader(str(tmp_path))
        assert loader.output_root('given') == 'given'
        assert loader.output_root() == DEFAULT_OUTPUT_ROOT
        monkeypatch.setenv('CRFLOW_OUT', str(tmp_path / 'env'))
        assert loader.output_root() == str(tmp_path / 'env')


class TestRunScenario:

    def test_flat_run(self, tmp_path):
        result = run_scenario(parse_config(flat_document()), str(tmp_path))
        assert result.exit_code == 0
        assert result.out_dir == os.path.join(str(tmp_path), 'small_flat')

        path = os.path.join(result.out_dir, 'timeseries.csv')
        rows = read_rows(path)
        assert tuple(rows[0]) == TIMESERIES_COLUMNS
        assert len(rows) == 7
        with open(path, 'rb') as f:
            assert b'\r\n' not in f.read()

        with open(os.path.join(result.out_dir, 'summary.json')) as f:
            summary = json.load(f)
        assert summary['termination'] == 'completed'
        assert summary['frames'] == 6
        assert summary['verdicts']['fixed_point']
        assert set(summary['columns']) == set(TIMESERIES_COLUMNS)
        assert summary['pressure_source'] == 'deviation'
        assert summary['flow']['pressure_source'] == 'deviation'

    def test_linearized_pressure_is_labelled(self, tmp_path):
        result = run_scenario(parse_config(flat_document(pressure_source='linearized')), str(tmp_path))
        assert result.exit_code == 0
        assert result.summary['pressure_source'] == 'linearized'

    def test_unknown_pressure_source(self):
        with pytest.raises(ConfigError) as info:
            parse_config(flat_document(pressure_source='scalar'))
        assert info.value.field == 'flow.pressure_source'

    def test_output_is_deterministic(self, tmp_path):
        scenario = parse_config(flat_document())
        first = run_scenario(scenario, str(tmp_path / 'a'))
        second = run_scenario(scenario, str(tmp_path / 'b'))
        with open(os.path.join(first.out_dir, 'timeseries.csv'), 'rb') as f:
            expected = f.read()
        with open(os.path.join(second.out_dir, 'timeseries.csv'), 'rb') as f:
            assert f.read() == expected

    def test_homogeneous_columns(self, tmp_path):
        document = squashed_document()
        document['diagnostics'] = {'frames': True, 'jacobian_probe': True}
        result = run_scenario(parse_config(document), str(tmp_path))
        assert result.exit_code == 0
        rows = read_rows(os.path.join(result.out_dir, 'timeseries.csv'))
        header = rows[0]
        for row in rows[1:]:
            values = dict(zip(header, row))
            assert float(values['vol']) > 0.0
            assert float(values['Q']) > 0.0
            assert values['mass'] == '' and values['mass_err'] == ''
        assert result.summary['verdicts']['q_monotone_increasing']
        assert result.summary['reports']['jacobian_probe']['size'] == 3
        with open(os.path.join(result.out_dir, 'frames.json')) as f:
            frames = json.load(f)['frames']
        assert len(frames) == 5
        assert len(frames[0]['coeffs']) == 3

    def test_throat_mismatch_is_rejected(self, tmp_path):
        document = {
            'name': 'bad_throat',
            'initial_data': {'kind': 'schwarzschild_conformal', 'A0': 0.1},
            'grid': {'rho_min': 0.01, 'n_nodes': 64},
        }
        result = run_scenario(parse_config(document), str(tmp_path))
        assert result.exit_code == 2
        with open(os.path.join(result.out_dir, 'summary.json')) as f:
            summary = json.load(f)
        assert summary['termination'] == 'rejected'
        assert not os.path.exists(os.path.join(result.out_dir, 'timeseries.csv'))

    def test_pressure_failure_exit_code(self, tmp_path, monkeypatch):
        def failing(config, g0, recorder=None):
            raise NonInvertibleOperator("singular")
        monkeypatch.setattr(runner, 'run_flow', failing)
        result = run_scenario(parse_config(flat_document()), str(tmp_path))
        assert result.exit_code == 3
        assert result.summary['termination'] == 'pressure_failure'

    def test_breakdown_exit_code(self, tmp_path, monkeypatch):
        def breaking(config, g0, recorder=None):
            return FlowTrajectory(config=config, termination=TerminationStatus.NUMERICAL_BREAKDOWN,
                                  message="Non-finite values in flow rate")
        monkeypatch.setattr(runner, 'run_flow', breaking)
        result = run_scenario(parse_config(flat_document()), str(tmp_path))
        assert result.exit_code == 4
        assert result.summary['final_time'] is None

    def test_nan_is_written_as_null(self, tmp_path):
        path = tmp_path / 'values.json'
        runner.write_json(str(path), {'mass': float('nan'), 'values': np.array([1.0, np.inf])})
        assert json.loads(path.read_text()) == {'mass': None, 'values': [1.0, None]}


class TestSweep:

    def test_duplicate_names(self, tmp_path):
        scenario = parse_config(squashed_document())
        with pytest.raises(ConfigError):
            run_sweep([scenario, scenario], str(tmp_path))

    def test_two_runs(self, tmp_path):
        scenarios = [parse_config(squashed_document('first', 3)), parse_config(squashed_document('second', 4))]
        results = run_sweep(scenarios, str(tmp_path), max_workers=2)
        assert results == [('first', 0), ('second', 0)]
        assert sweep_exit_code(results) == 0
        assert os.path.exists(tmp_path / 'second' / 'timeseries.csv')

    def test_exit_code_is_worst_case(self):
        assert sweep_exit_code([('a', 0), ('b', 4), ('c', 2)]) == 4
        assert sweep_exit_code([]) == 0
