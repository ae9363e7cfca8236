"""
Command-Line Interface
crflow run | scenarios | schema

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

import argparse
import json
import sys
from typing import List, Optional

from .flowcore.exceptions import ConfigError
from .flowutils.properties_configurator import PropertiesConfigurator
from .flowutils.runner import EXIT_CONFIG, EXIT_OK, run_scenario, run_sweep, sweep_exit_code
from .flowutils.scenario import emit_schema, list_scenarios, load_scenario
from .flowutils.system_initializer import initialize_system


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='crflow',
        description='Conformal Ricci flow experiments on radial and homogeneous metrics',
        epilog='Settings may be overridden with --key=value, e.g. --crflow.default.n_nodes=128',
    )
    parser.add_argument('--log-level', default=None, choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                        help='logging level (default: CRFLOW_LOG_LEVEL or INFO)')
    parser.add_argument('--config-dir', default=None, help='directory with application.properties and scenarios.json')
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='run one or more scenarios')
    run.add_argument('config', nargs='+', help='scenario file, inline JSON, or built-in scenario name')
    run.add_argument('--out', default=None, help='output root (default: CRFLOW_OUT or ./crflow_out)')
    run.add_argument('--sweep', action='store_true', help='run the scenarios concurrently in worker processes')

    commands.add_parser('scenarios', help='list the built-in scenarios')
    commands.add_parser('schema', help='print the JSON schema of scenario documents')
    return parser


def _run(args, system) -> int:
    loader = system.config_loader
    try:
        scenarios = [load_scenario(source, loader) for source in args.config]
    except ConfigError as e:
        print(f"crflow: configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    out_root = system.output_root(args.out)
    if args.sweep:
        try:
            results = run_sweep(scenarios, out_root, loader.get_int_property('crflow.sweep.max_workers', 4))
        except ConfigError as e:
            print(f"crflow: configuration error: {e}", file=sys.stderr)
            return EXIT_CONFIG
    else:
        results = []
        for scenario in scenarios:
            result = run_scenario(scenario, out_root)
            results.append((result.name, result.exit_code))

    for name, code in results:
        print(f"{name}: exit {code}")
    return sweep_exit_code(results)


def main(argv: Optional[List[str]] = None) -> int:
    argv = PropertiesConfigurator().apply_overrides(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    system = initialize_system(args.config_dir, args.log_level)

    if args.command == 'scenarios':
        for entry in list_scenarios(system.config_loader):
            print(f"{entry['name']:<26} {entry['geometry_kind']:<12} {entry['description']}")
        return EXIT_OK
    if args.command == 'schema':
        print(json.dumps(emit_schema(), indent=2))
        return EXIT_OK
    return _run(args, system)


if __name__ == '__main__':
    sys.exit(main())
