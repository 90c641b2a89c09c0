import argparse
import json
import logging
import sys

from .accept import accept
from .config import RunConfig, resolve_output, parse_rgrid
from .congruence import astar_bruteforce, astar_count
from .diophantine import DioParams, dio_distribution
from .farey import count_farey, enumerate_farey, growth_check
from .frobenius import (
    associated_lattice,
    covering_radius_bounds,
    frobenius_census,
    frobenius_number,
    identity_check
)
from .region import Box
from .report import dumps, write_census_csv, write_farey_csv
from .spacing import equidistribution, p0_stat, p_stat
from .util import (
    FareystatError,
    NumericOverflowError,
    ValidationError,
    SCHEMA_VERSION
)

__all__ = ['EXIT_OK',
           'EXIT_ERROR',
           'EXIT_VALIDATION',
           'EXIT_OVERFLOW',
           'EXIT_CRITERION',
           'build_parser',
           'run',
           'main']

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VALIDATION = 2
EXIT_OVERFLOW = 3
EXIT_CRITERION = 4


def _add_system(parser):
    parser.add_argument('--n', type=int, help='dimension')
    parser.add_argument('--modulus', type=int, help='modulus m')
    parser.add_argument('--class', dest='classes', action='append',
                        metavar='ROW', help='residue row "a1,...,a_{n+1}"; '
                                            'repeatable')


def _add_output(parser):
    parser.add_argument('--out', help='output file; relative paths go to '
                                      '$FAREYSTAT_OUTPUT_DIR if set')
    parser.add_argument('--format', choices=('json', 'csv'))
    parser.add_argument('--workers', type=int, help='number of processes')


def _add_sampling(parser):
    parser.add_argument('--samples', type=int)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--kmax', type=int)
    parser.add_argument('--batch-size', dest='batch_size', type=int)


def build_parser():
    """Construct the argument parser.

    Returns:
        :class:`argparse.ArgumentParser`: Parser.
    """
    parser = argparse.ArgumentParser(
        prog='fareystat',
        description='Restricted Farey sequences, their statistics and '
                    'Frobenius numbers.'
    )
    parser.add_argument('-v', '--verbose', action='count', default=0)
    parser.add_argument('--quiet', action='store_true')
    commands = parser.add_subparsers(dest='command', required=True)

    farey = commands.add_parser('farey', help='enumerate Farey sequences')
    farey.add_argument('action', choices=('count', 'list', 'growth'))
    farey.add_argument('--q', type=int, required=True, help='level Q')
    _add_system(farey)
    _add_output(farey)

    stats = commands.add_parser('stats', help='spacing statistics')
    stats.add_argument('action', choices=('p', 'p0', 'equi'))
    stats.add_argument('--q', type=int, required=True)
    stats.add_argument('--window', help='"box:l1,u1;..." or "ball:c;r"')
    stats.add_argument('--domain', help='subset of the torus')
    stats.add_argument('--scaling', choices=('count', 'sigma'))
    _add_system(stats)
    _add_sampling(stats)
    _add_output(stats)

    dio = commands.add_parser('dio', help='EST and Kesten counts')
    dio.add_argument('action', choices=('est', 'kesten'))
    dio.add_argument('--q', type=int, required=True)
    dio.add_argument('--alpha', type=float, required=True)
    dio.add_argument('--c', type=float)
    dio.add_argument('--domain')
    _add_system(dio)
    _add_sampling(dio)
    _add_output(dio)

    frob = commands.add_parser('frob', help='Frobenius numbers')
    frob.add_argument('action',
                      choices=('number', 'lattice', 'identity', 'census'))
    frob.add_argument('--a', help='primitive row "a1,...,a_{n+1}"')
    frob.add_argument('--h', type=float, help='covering radius grid spacing')
    frob.add_argument('--t', type=int, help='dilation T of the census')
    frob.add_argument('--domain', help='census box "l1,u1;...;l_{n+1},u"')
    frob.add_argument('--rgrid', help='thresholds "start:stop:step"')
    _add_system(frob)
    _add_output(frob)

    congr = commands.add_parser('congr', help='orbit counts')
    congr.add_argument('action', choices=('astar', 'brute'))
    _add_system(congr)
    _add_output(congr)

    acc = commands.add_parser('accept', help='acceptance suite')
    acc.add_argument('action', choices=('fast', 'full'))
    _add_output(acc)
    return parser


def _farey(config):
    sys_ = config.residue_system()
    if config.action == 'count':
        count = count_farey(config.n, config.q, sys_, workers=config.workers)
        return {'type': 'count', 'schema_version': SCHEMA_VERSION,
                'n': config.n, 'Q': config.q, 'm': config.modulus,
                'count': count}
    elif config.action == 'growth':
        return growth_check(config.n, config.q, sys_, config.workers)
    fset = enumerate_farey(config.n, config.q, sys_)
    if config.output_format() == 'csv':
        return fset
    return {'type': 'list', 'schema_version': SCHEMA_VERSION,
            'n': config.n, 'Q': config.q, 'm': config.modulus,
            'q': fset.q.tolist(), 'p': fset.p.tolist()}


def _torus(n, m):
    return Box([0] * n, [m] * n)


def _stats(config):
    sys_ = config.residue_system()
    fset = enumerate_farey(config.n, config.q, sys_)
    domain = config.test_set('domain', _torus(config.n, config.modulus))
    if config.action == 'equi':
        observed, expected = equidistribution(fset, domain)
        return {'type': 'equidistribution', 'schema_version': SCHEMA_VERSION,
                'Q': config.q, 'observed': observed, 'expected': expected}
    window = config.test_set('window')
    if config.action == 'p':
        return p_stat(fset, domain, window, kmax=config.kmax,
                      samples=config.samples, seed=config.seed,
                      scaling=config.scaling, batch_size=config.batch_size,
                      workers=config.workers)
    return p0_stat(fset, domain, window, kmax=config.kmax,
                   scaling=config.scaling)


def _dio(config):
    params = DioParams(config.alpha, config.q, config.residue_system(),
                       c=config.c if config.action == 'est' else None)
    domain = config.test_set('domain', _torus(config.n, 1))
    return dio_distribution(config.action, domain, params,
                            samples=config.samples, seed=config.seed,
                            kmax=config.kmax, batch_size=config.batch_size,
                            workers=config.workers)


def _frob(config):
    if config.action == 'census':
        domain = config.test_set('domain', _torus(config.n + 1, 1))
        return frobenius_census(config.residue_system(), domain, config.t,
                                parse_rgrid(config.rgrid),
                                workers=config.workers,
                                progress=config.out is not None)
    a = list(config.a)
    record = {'type': 'frobenius', 'schema_version': SCHEMA_VERSION,
              'a': a, 'F': frobenius_number(a)}
    if config.action in ('lattice', 'identity'):
        basis = associated_lattice(a)
        lower, upper = covering_radius_bounds(basis, float(config.h))
        record.update({'basis': basis.rows.tolist(),
                       'det': basis.det,
                       'h': config.h,
                       'covering_radius': lower,
                       'covering_radius_upper': upper})
    if config.action == 'identity':
        record['residual'] = identity_check(a, config.h)
    return record


def _congr(config):
    sys_ = config.residue_system()
    if config.action == 'astar':
        return astar_count(sys_)
    return astar_bruteforce(sys_)


def _emit(config, result):
    out = resolve_output(config.out)
    if config.output_format() == 'csv':
        if out is None:
            raise ValidationError('--out', 'CSV output needs a file')
        if config.command == 'frob' and config.action == 'census':
            write_census_csv(result, out)
        elif config.command == 'farey' and config.action == 'list':
            write_farey_csv(result, out)
        else:
            raise ValidationError('--format', 'CSV is only available for '
                                              'farey list and frob census')
        return
    text = dumps(result)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, 'w') as f:
            f.write(text)
        log.info('Wrote %s.', out)


def _error_record(e, code):
    record = {'error': type(e).__name__, 'message': str(e), 'code': code}
    if isinstance(e, ValidationError):
        record['field'] = e.field
    sys.stderr.write(json.dumps(record, sort_keys=True) + '\n')
    return code


def run(config):
    """Run a configuration and write its output.

    Args:
        config (:class:`.config.RunConfig`): Configuration.

    Returns:
        int: Exit status.
    """
    try:
        config.validate()
        if config.command == 'accept':
            results = accept(config.action, workers=config.workers)
            _emit(config, {'type': 'acceptance',
                           'schema_version': SCHEMA_VERSION,
                           'suite': config.action,
                           'results': [r.to_dict() for r in results]})
            failed = [r.criterion for r in results if not r.passed]
            if failed:
                log.error('Failed criteria: %s.', ', '.join(failed))
                return EXIT_CRITERION
            return EXIT_OK
        handlers = {'farey': _farey,
                    'stats': _stats,
                    'dio': _dio,
                    'frob': _frob,
                    'congr': _congr}
        _emit(config, handlers[config.command](config))
        return EXIT_OK
    except ValidationError as e:
        return _error_record(e, EXIT_VALIDATION)
    except (NumericOverflowError, OverflowError) as e:
        return _error_record(e, EXIT_OVERFLOW)
    except (FareystatError, ValueError) as e:
        return _error_record(e, EXIT_ERROR)


def main(argv=None):
    """Entry point of the `fareystat` command.

    Args:
        argv (list[str], optional): Arguments. Defaults to `sys.argv[1:]`.

    Returns:
        int: Exit status.
    """
    args = build_parser().parse_args(argv)
    level = logging.WARNING
    if args.quiet:
        level = logging.ERROR
    elif args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level,
                        format='%(asctime)s %(name)s %(levelname)s '
                               '%(message)s')
    return run(RunConfig.from_args(args))


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
