"""
Command-line front end.

Every subcommand reads chains and metrics from JSON, runs one computation and writes a
single report (JSON or TSV) that embeds the schema version, the tolerances, the run
parameters and the SHA-256 of every input file.

Exit codes: 0 success, 1 other package error, 2 invalid input, 3 no convergence.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..concentration import (
    concentration_params,
    distance_exp_moment_bound,
    distance_tail_bound,
    exp_moment_bound,
    function_tail_bound,
    simulate_function_tail,
)
from ..coupling import (
    coupling_irreducible,
    eigenrelation_error,
    export_coupling,
    extract_coupling,
    marginal_error,
    symmetrize,
)
from ..eigendistance import iterate_F, iterate_maximal, result_from_metric, verify_eigendistance
from ..example_chains import build_example, random_metric
from ..exceptions import DivergentTail, EigendistError, ValidationError
from ..markov_core import alpha_metric, indicator_metric, validate_chain, validate_metric
from ..models import ExampleFamily, ExampleSpec, MarkovChain, Partition, PseudoMetric, RunConfig, Tolerances
from ..structure import find_lumpable_partition, quotient_chain, zero_set_partition
from ..utils import configure_logging, dumps_report, dumps_tsv, file_sha256, load_json

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0.0"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2
EXIT_NOT_CONVERGED = 3


def report_schema_version() -> str:
    """Version of the report layout; bumped whenever a report field changes."""
    return SCHEMA_VERSION


# Input loading

def load_chain(path: str) -> MarkovChain:
    data = load_json(path, required='matrix')
    return validate_chain(data['matrix'], data.get('labels'))


def load_metric(path: str, tolerances: Tolerances) -> PseudoMetric:
    data = load_json(path, required='matrix')
    return validate_metric(data['matrix'], tolerances.metric_tol)


def load_partition(path: str, n: int) -> Partition:
    data = load_json(path, required='blocks')
    try:
        return Partition.from_blocks(data['blocks'], n)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"{path}: 'blocks' must be a list of lists of states") from e


def load_function(path: str, n: int) -> np.ndarray:
    data = load_json(path, required='values')
    try:
        values = np.asarray(data['values'], dtype=float)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"{path}: 'values' must be a list of numbers") from e
    if values.shape != (n,):
        raise ValidationError(f"{path}: expected {n} values, got shape {values.shape}")
    return values


def _require(value: Optional[str], flag: str, subcommand: str) -> str:
    if not value:
        raise ValidationError(f"{subcommand} needs {flag}")
    return value


# Subcommands; each returns (result, exit_code)

Handler = Callable[[RunConfig], Tuple[Dict[str, Any], int]]


def _converged_code(converged: bool) -> int:
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def cmd_eigendist(config: RunConfig):
    chain = load_chain(_require(config.chain_path, "--chain", "eigendist"))
    init_kind = config.options.get('init', 'indicator')
    if init_kind == 'alpha':
        init = alpha_metric(chain)
    elif init_kind == 'random':
        init = random_metric(chain.n, config.seed)
    else:
        init = indicator_metric(chain.n)
    result = iterate_F(chain, config.p, init=init, tolerances=config.tolerances)
    return result.to_dict(), _converged_code(result.converged)


def cmd_maximal(config: RunConfig):
    chain = load_chain(_require(config.chain_path, "--chain", "maximal"))
    result = iterate_maximal(chain, config.p, tolerances=config.tolerances)
    return result.to_dict(), _converged_code(result.converged)


def cmd_verify(config: RunConfig):
    chain = load_chain(_require(config.chain_path, "--chain", "verify"))
    rho = load_metric(_require(config.metric_path, "--metric", "verify"), config.tolerances)
    check = verify_eigendistance(chain, rho, config.p, config.tolerances)
    out = check.to_dict()
    out['proper'] = rho.is_proper()
    return out, EXIT_OK


def _eigendistance_for(config: RunConfig, chain: MarkovChain):
    if config.metric_path:
        rho = load_metric(config.metric_path, config.tolerances)
        return result_from_metric(chain, rho, config.p, config.tolerances)
    return iterate_F(chain, config.p, tolerances=config.tolerances)


def cmd_coupling(config: RunConfig):
    chain = load_chain(_require(config.chain_path, "--chain", "coupling"))
    eig = _eigendistance_for(config, chain)
    coupling = symmetrize(extract_coupling(chain, eig, tolerances=config.tolerances))
    irreducible, classes = coupling_irreducible(coupling)
    _, marginal = marginal_error(coupling, chain)
    _, miss = eigenrelation_error(coupling)
    out = {
        'kappa': eig.kappa,
        'p': eig.p,
        'rho': eig.rho.matrix,
        'irreducible': irreducible,
        'classes': [[list(pair) for pair in cls] for cls in classes],
        'marginal_error': marginal,
        'eigenrelation_miss': miss,
        'zero_set_partition': zero_set_partition(eig.rho).to_dict()['blocks'],
    }
    if config.options.get('export'):
        out['records'] = export_coupling(coupling)
    return out, _converged_code(eig.converged)


def cmd_lumpable(config: RunConfig):
    chain = load_chain(_require(config.chain_path, "--chain", "lumpable"))
    mode = config.options.get('mode', 'exhaustive')
    partition = find_lumpable_partition(chain, mode=mode)
    return {
        'mode': mode,
        'partition': partition.to_dict()['blocks'] if partition else None,
        'certified_irreducible': partition is None and mode == 'exhaustive',
    }, EXIT_OK


def cmd_quotient(config: RunConfig):
    chain = load_chain(_require(config.chain_path, "--chain", "quotient"))
    partition = load_partition(_require(config.options.get('partition'), "--partition", "quotient"), chain.n)
    quotient = quotient_chain(chain, partition)
    return {'partition': partition.to_dict()['blocks'], 'chain': quotient.to_dict()}, EXIT_OK


def cmd_concentration(config: RunConfig):
    chain = load_chain(_require(config.chain_path, "--chain", "concentration"))
    rho = load_metric(_require(config.metric_path, "--metric", "concentration"), config.tolerances)
    kappa = config.options.get('kappa')
    if kappa is None:
        kappa = verify_eigendistance(chain, rho, 1.0, config.tolerances).kappa_hat
    x0 = int(config.options.get('x0', 0))
    T = int(config.options.get('T', 1))
    function_path = config.options.get('function')
    f = load_function(function_path, chain.n) if function_path else rho.matrix[x0].copy()

    params = concentration_params(chain, rho, kappa, f)
    r_grid = [0.5 * k for k in range(1, 11)]
    out: Dict[str, Any] = {
        'params': params.to_dict(),
        'T': T,
        'x0': x0,
        'r': r_grid,
        'function_bound': [function_tail_bound(params.lip_norm, params.J, kappa, T, r) for r in r_grid],
        'distance_bound': [min(1.0, distance_tail_bound(params.J, kappa, T, r)) for r in r_grid],
    }
    try:
        out['exp_moment_bound'] = exp_moment_bound(params, T)
        out['distance_exp_moment_bound'] = distance_exp_moment_bound(params, 1.0, T)
    except DivergentTail as e:
        logger.warning("Exponential-moment series is not useful here: %s", e)
        out['exp_moment_bound'] = None
        out['distance_exp_moment_bound'] = None
    if config.options.get('simulate'):
        report = simulate_function_tail(chain, f, rho, kappa, x0, T, config.samples, config.seed, r_grid,
                                        strict=False)
        out['tail'] = report.to_dict()
        out['tail']['dominated'] = report.dominated
    return out, EXIT_OK


def _example_spec(config: RunConfig) -> ExampleSpec:
    spec_path = config.options.get('spec')
    if spec_path:
        data = load_json(spec_path, required='family')
        try:
            return ExampleSpec.from_dict(data)
        except ValueError:
            raise ValidationError(f"Unknown family {data['family']!r} in {spec_path}")
    family = _require(config.options.get('family'), "a family or --spec", "example")
    params = {k: v for k, v in config.options.get('params', {}).items() if v is not None}
    return ExampleSpec(ExampleFamily(family), params)


def cmd_example(config: RunConfig):
    spec = _example_spec(config)
    try:
        generated = build_example(spec)
    except KeyError as e:
        raise ValidationError(f"{spec.family.value} needs parameter {e.args[0]!r}")
    return {
        'family': spec.family.value,
        'params': spec.params,
        'chain': generated.chain.to_dict(),
        'metric': generated.metric.to_dict() if generated.metric is not None else None,
        'kappa': generated.kappa,
    }, EXIT_OK


def cmd_schema(config: RunConfig):
    return {'schema_version': report_schema_version()}, EXIT_OK


HANDLERS: Dict[str, Handler] = {
    'eigendist': cmd_eigendist,
    'maximal': cmd_maximal,
    'verify': cmd_verify,
    'coupling': cmd_coupling,
    'lumpable': cmd_lumpable,
    'quotient': cmd_quotient,
    'concentration': cmd_concentration,
    'example': cmd_example,
    'schema': cmd_schema,
}


# Argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--chain', help='Chain JSON {"labels": [...], "matrix": [[...]]}')
    common.add_argument('--metric', help='Metric JSON {"matrix": [[...]]}')
    common.add_argument('--p', type=float, default=1.0, help='Wasserstein exponent (default 1)')
    common.add_argument('--tol', type=float, default=None, help='Fixed-point tolerance (fp_tol)')
    common.add_argument('--max-iter', type=int, default=None, help='Iteration cap')
    common.add_argument('--seed', type=int, default=0)
    common.add_argument('--samples', type=int, default=10000)
    common.add_argument('--out', help='Write the report here instead of stdout')
    common.add_argument('--format', choices=['json', 'tsv'], default='json')
    common.add_argument('-v', '--verbose', action='count', default=0)
    common.add_argument('-q', '--quiet', action='store_true')

    parser = argparse.ArgumentParser(prog='eigendist', description='Wasserstein eigendistances of finite Markov chains')
    sub = parser.add_subparsers(dest='subcommand', required=True)

    p = sub.add_parser('eigendist', parents=[common], help='Normalized fixed-point iteration')
    p.add_argument('--init', choices=['indicator', 'alpha', 'random'], default='indicator')
    sub.add_parser('maximal', parents=[common], help='Maximal curvature-zero fixed point')
    sub.add_parser('verify', parents=[common], help='Check W_p(rho) = (1 - kappa) rho')
    p = sub.add_parser('coupling', parents=[common], help='Extract, symmetrize and analyze the coupling')
    p.add_argument('--export', action='store_true', help='Include the sparse kernel records')
    p = sub.add_parser('lumpable', parents=[common], help='Search for a lumpable partition')
    p.add_argument('--mode', choices=['exhaustive', 'heuristic'], default='exhaustive')
    p = sub.add_parser('quotient', parents=[common], help='Quotient chain of a lumpable partition')
    p.add_argument('--partition', help='Partition JSON {"blocks": [[...], ...]}')
    p = sub.add_parser('concentration', parents=[common], help='Concentration bounds and tail harness')
    p.add_argument('--kappa', type=float, default=None)
    p.add_argument('--x0', type=int, default=0)
    p.add_argument('--T', type=int, default=1)
    p.add_argument('--function', help='Function JSON {"values": [...]}; defaults to rho(x0, .)')
    p.add_argument('--simulate', action='store_true', help='Add a Monte Carlo tail report')
    p = sub.add_parser('example', parents=[common], help='Emit a generated chain and its closed-form metric')
    p.add_argument('family', nargs='?', choices=[f.value for f in ExampleFamily])
    p.add_argument('--spec', help='ExampleSpec JSON {"family": ..., "params": {...}}; required for product')
    p.add_argument('--L', type=int)
    p.add_argument('--q', type=float)
    p.add_argument('--n', type=int)
    p.add_argument('--N', type=int)
    p.add_argument('--weights', type=float, nargs='+')
    p.add_argument('--metric-kind', choices=['sine', 'parity'], default=None)
    p.add_argument('--min-selfloop', type=float, default=None)
    sub.add_parser('schema', parents=[common], help='Print the report schema version')
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    defaults = Tolerances()
    tolerances = Tolerances(
        metric_tol=defaults.metric_tol,
        fp_tol=args.tol if args.tol is not None else defaults.fp_tol,
        ot_tol=defaults.ot_tol,
        max_iter=args.max_iter if args.max_iter is not None else defaults.max_iter,
        residual_tol=defaults.residual_tol,
    )
    if args.p < 1:
        raise ValidationError(f"--p must be at least 1, got {args.p}")
    if args.samples < 1:
        raise ValidationError("--samples must be at least 1")

    options: Dict[str, Any] = {}
    if args.subcommand == 'eigendist':
        options['init'] = args.init
    elif args.subcommand == 'coupling':
        options['export'] = args.export
    elif args.subcommand == 'lumpable':
        options['mode'] = args.mode
    elif args.subcommand == 'quotient':
        options['partition'] = args.partition
    elif args.subcommand == 'concentration':
        options.update(kappa=args.kappa, x0=args.x0, T=args.T, function=args.function, simulate=args.simulate)
    elif args.subcommand == 'example':
        options['family'] = args.family
        options['spec'] = args.spec
        options['params'] = {
            'L': args.L, 'q': args.q, 'n': args.n, 'N': args.N, 'a': args.weights,
            'metric': args.metric_kind, 'seed': args.seed, 'min_selfloop': args.min_selfloop,
        }

    return RunConfig(
        subcommand=args.subcommand,
        chain_path=args.chain,
        metric_path=args.metric,
        p=args.p,
        tolerances=tolerances,
        seed=args.seed,
        samples=args.samples,
        out=args.out,
        fmt=args.format,
        options=options,
    )


def _input_hashes(config: RunConfig) -> Dict[str, str]:
    paths = {'chain': config.chain_path, 'metric': config.metric_path}
    for key in ('partition', 'function', 'spec'):
        if config.options.get(key):
            paths[key] = config.options[key]
    return {name: file_sha256(path) for name, path in paths.items() if path and Path(path).exists()}


def _portable_options(options: Dict[str, Any]) -> Dict[str, Any]:
    # file paths differ between machines; their hashes are under 'inputs'
    return {k: v for k, v in options.items() if k not in ('partition', 'function', 'spec')}


def build_report(config: RunConfig, result: Dict[str, Any]) -> Dict[str, Any]:
    return {
        'schema_version': report_schema_version(),
        'subcommand': config.subcommand,
        'inputs': _input_hashes(config),
        'tolerances': config.tolerances.to_dict(),
        'parameters': {'p': config.p, 'seed': config.seed, 'samples': config.samples,
                       'options': _portable_options(config.options)},
        'result': result,
    }


def run(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one subcommand and write its report; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(-1 if args.quiet else args.verbose)

    try:
        config = config_from_args(args)
        result, code = HANDLERS[config.subcommand](config)
    except ValidationError as e:
        logger.error("Invalid input: %s", e)
        return EXIT_INVALID
    except EigendistError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_ERROR

    report = build_report(config, result)
    text = dumps_tsv(report) if config.fmt == 'tsv' else dumps_report(report)
    if config.out:
        Path(config.out).write_text(text, encoding='utf-8')
        logger.info("Report written to %s", config.out)
    else:
        sys.stdout.write(text)
    if code == EXIT_NOT_CONVERGED:
        logger.warning("Iteration did not converge; the report holds the last iterate")
    return code


def main():
    sys.exit(run())
