"""
Tests for the crflow command line.
"""

import json
import os

import pytest

from crflow.cli import build_parser, main


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / 'flat.json'
    path.write_text(json.dumps({
        'name': 'cli_flat',
        'initial_data': {'kind': 'flat'},
        'grid': {'n_nodes': 32},
        'flow': {'target_steps': 3},
    }))
    return str(path)


class TestCommands:

    def test_schema(self, clean_settings, capsys):
        assert main(['schema']) == 0
        schema = json.loads(capsys.readouterr().out)
        assert schema['title'] == 'crflow scenario'

    def test_scenarios(self, clean_settings, capsys):
        assert main(['scenarios']) == 0
        out = capsys.readouterr().out
        assert 'schwarzschild_conformal' in out
        assert 'squashed_homogeneous' in out

    def test_run(self, clean_settings, scenario_file, tmp_path, capsys):
        out_root = tmp_path / 'out'
        assert main(['run', scenario_file, '--out', str(out_root)]) == 0
        assert 'cli_flat: exit 0' in capsys.readouterr().out
        assert os.path.exists(out_root / 'cli_flat' / 'summary.json')

    def test_run_uses_environment_output_root(self, clean_settings, scenario_file, tmp_path, monkeypatch):
        monkeypatch.setenv('CRFLOW_OUT', str(tmp_path / 'env_out'))
        assert main(['run', scenario_file]) == 0
        assert os.path.exists(tmp_path / 'env_out' / 'cli_flat' / 'timeseries.csv')

    def test_property_override(self, clean_settings, tmp_path):
        path = tmp_path / 'defaults.json'
        path.write_text(json.dumps({'name': 'override_flat', 'initial_data': {'kind': 'flat'},
                                    'flow': {'target_steps': 2}}))
        out_root = tmp_path / 'out'
        assert main(['--crflow.default.n_nodes=24', 'run', str(path), f'--out={out_root}']) == 0
        with open(out_root / 'override_flat' / 'summary.json') as f:
            assert json.load(f)['config']['grid']['n_nodes'] == 24

    def test_configuration_error(self, clean_settings, tmp_path, capsys):
        path = tmp_path / 'bad.json'
        path.write_text('{"name": "bad", "initial_data": {"kind": "flat"}, "flow": {"dt": 1}}')
        assert main(['run', str(path), '--out', str(tmp_path)]) == 2
        assert 'flow.dt' in capsys.readouterr().err

    def test_sweep_duplicates(self, clean_settings, scenario_file, tmp_path, capsys):
        assert main(['run', scenario_file, scenario_file, '--sweep', '--out', str(tmp_path)]) == 2
        assert 'cli_flat' in capsys.readouterr().err


class TestParser:

    def test_command_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_log_level_choices(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(['--log-level', 'LOUD', 'schema'])
