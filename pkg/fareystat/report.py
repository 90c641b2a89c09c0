import csv
import json
import logging

import numpy as np
from plum import Dispatcher

from .congruence import OrbitCount
from .diophantine import DioReport
from .farey import GrowthReport
from .frobenius import CensusReport
from .spacing import SpacingReport
from .util import SCHEMA_VERSION, ValidationError

__all__ = ['CENSUS_COLUMNS',
           'to_dict',
           'dumps',
           'write_json',
           'read_json',
           'write_census_csv',
           'read_census_csv',
           'write_farey_csv',
           'read_farey_csv']

log = logging.getLogger(__name__)

_dispatch = Dispatcher()

#: Columns of a census CSV file.
CENSUS_COLUMNS = ('R', 'restricted_tail', 'full_tail',
                  'restricted_norm', 'full_norm')


def _pmf(pmf):
    return {str(k): v for k, v in sorted(pmf.items())}


@_dispatch
def to_dict(report: SpacingReport):
    """Convert a report to a JSON-compatible dictionary.

    Args:
        report (object): Report.

    Returns:
        dict: Record, tagged with its type and the schema version.
    """
    return {'type': 'spacing',
            'schema_version': report.schema_version,
            'kind': report.kind,
            'n': report.n,
            'Q': report.Q,
            'm': report.m,
            'classes': report.classes,
            'scale': report.scale,
            'pmf': _pmf(report.pmf),
            'mean': report.mean,
            'kmax': report.kmax,
            'tail': report.tail,
            'samples': report.samples,
            'seed': report.seed,
            'generator': report.generator}


@_dispatch
def to_dict(report: DioReport):
    return {'type': 'dio',
            'schema_version': report.schema_version,
            'kind': report.kind,
            'n': report.n,
            'Q': report.Q,
            'm': report.m,
            'classes': report.classes,
            'alpha': report.alpha,
            'c': report.c,
            'pmf': _pmf(report.pmf),
            'mean': report.mean,
            'predicted_mean': report.predicted_mean,
            'positive_fraction': report.positive_fraction,
            'kmax': report.kmax,
            'tail': report.tail,
            'samples': report.samples,
            'seed': report.seed,
            'generator': report.generator}


@_dispatch
def to_dict(report: CensusReport):
    return {'type': 'census',
            'schema_version': report.schema_version,
            'n': report.n,
            'm': report.m,
            'classes': report.classes,
            'domain': report.domain,
            'T': report.T,
            'astar': report.astar,
            'index': report.index,
            'density': report.density,
            'count_ratio': report.count_ratio,
            'i_a_estimate': report.i_a_estimate,
            'ks': report.ks,
            'restricted_count': report.restricted.count,
            'full_count': report.full.count,
            'rows': [dict(zip(CENSUS_COLUMNS, row))
                     for row in report.rows()]}


@_dispatch
def to_dict(report: GrowthReport):
    return {'type': 'growth',
            'schema_version': SCHEMA_VERSION,
            'count': report.count,
            'sigma': report.sigma,
            'ratio': report.ratio}


@_dispatch
def to_dict(report: OrbitCount):
    return {'type': 'orbits',
            'schema_version': SCHEMA_VERSION,
            'astar': report.astar,
            'index': report.index,
            'density': str(report.density)}


@_dispatch
def to_dict(report: dict):
    return report


def dumps(report):
    """Serialise a report deterministically.

    Args:
        report (object): Report or dictionary.

    Returns:
        str: JSON with sorted keys and a trailing newline.
    """
    return json.dumps(to_dict(report), sort_keys=True, indent=2) + '\n'


def write_json(report, path):
    """Write a report as JSON.

    Args:
        report (object): Report or dictionary.
        path (str): Destination.
    """
    with open(path, 'w') as f:
        f.write(dumps(report))
    log.info('Wrote %s.', path)


def read_json(path):
    """Read a JSON report.

    Args:
        path (str): Source.

    Returns:
        dict: Record. Keys of a `pmf` are converted back to integers.
    """
    with open(path) as f:
        record = json.load(f)
    version = record.get('schema_version')
    if version != SCHEMA_VERSION:
        raise ValidationError('schema_version',
                              'expected {}, got {}'.format(SCHEMA_VERSION,
                                                           version))
    if 'pmf' in record:
        record['pmf'] = {int(k): v for k, v in record['pmf'].items()}
    return record


def write_census_csv(report, path):
    """Write the tail counts of a census as CSV.

    Args:
        report (:class:`.frobenius.CensusReport`): Census.
        path (str): Destination.
    """
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(CENSUS_COLUMNS)
        for R, restricted, full, restricted_norm, full_norm in report.rows():
            writer.writerow([repr(R), restricted, full,
                             repr(restricted_norm), repr(full_norm)])
    log.info('Wrote %s.', path)


def read_census_csv(path):
    """Read the tail counts of a census.

    Args:
        path (str): Source.

    Returns:
        list[dict]: Rows keyed by column name.
    """
    with open(path, newline='') as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CENSUS_COLUMNS:
            raise ValidationError('csv', 'unexpected columns {}'
                                         ''.format(reader.fieldnames))
        return [{'R': float(row['R']),
                 'restricted_tail': int(row['restricted_tail']),
                 'full_tail': int(row['full_tail']),
                 'restricted_norm': float(row['restricted_norm']),
                 'full_norm': float(row['full_norm'])} for row in reader]


def write_farey_csv(fset, path):
    """Write the points of a Farey set as CSV with columns `q, p1, ..., pn`.

    Args:
        fset (:class:`.farey.FareySet`): Points.
        path (str): Destination.
    """
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['q'] + ['p{}'.format(i + 1) for i in range(fset.n)])
        for q, p in zip(fset.q.tolist(), fset.p.tolist()):
            writer.writerow([q] + p)
    log.info('Wrote %d points to %s.', fset.count, path)


def read_farey_csv(path):
    """Read points written by :func:`.report.write_farey_csv`.

    Args:
        path (str): Source.

    Returns:
        tuple[vector, matrix]: Denominators and numerators.
    """
    with open(path, newline='') as f:
        reader = csv.reader(f)
        header = next(reader)
        n = len(header) - 1
        rows = np.array([[int(x) for x in row] for row in reader],
                        dtype=np.int64).reshape(-1, n + 1)
    return rows[:, 0], rows[:, 1:]
