import inspect
import logging
from math import log as ln, pi

import numpy as np

from .congruence import ResidueSystem, astar_count, astar_bruteforce
from .diophantine import (
    DioParams,
    dio_distribution,
    dio_region,
    predicted_mean,
    satisfies
)
from .farey import (
    count_farey,
    enumerate_farey,
    gaps_1d,
    growth_check,
    neighbor_determinants
)
from .frobenius import (
    frobenius_bruteforce,
    frobenius_census,
    frobenius_number,
    identity_check
)
from .lattice import horosphere_image
from .random import RandomStream
from .region import Box, region_contains
from .report import dumps
from .spacing import p_stat

__all__ = ['AcceptanceResult',
           'CRITERIA',
           'SUITES',
           'criterion_growth',
           'criterion_density',
           'criterion_neighbors',
           'criterion_spacing',
           'criterion_est',
           'criterion_kesten',
           'criterion_frobenius',
           'criterion_identity',
           'criterion_census',
           'criterion_determinism',
           'accept']

log = logging.getLogger(__name__)


class AcceptanceResult:
    """Outcome of one check of the acceptance suite.

    Args:
        criterion (str): Identifier, e.g. `1a`.
        description (str): What is checked.
        observed (float): Observed value.
        expected (float): Expected value.
        tolerance (float): Allowed deviation.
        relative (bool, optional): Interpret `tolerance` relative to
            `expected`. Defaults to `False`.
        error (str, optional): Error which prevented the check.
    """

    def __init__(self, criterion, description, observed, expected, tolerance,
                 relative=False, error=None):
        self.criterion = criterion
        self.description = description
        self.observed = None if observed is None else float(observed)
        self.expected = float(expected)
        self.tolerance = float(tolerance)
        self.relative = relative
        self.error = error
        if error is not None or observed is None:
            self.passed = False
        else:
            allowed = tolerance * abs(expected) if relative else tolerance
            self.passed = bool(abs(self.observed - self.expected) <= allowed)

    def to_dict(self):
        """Convert to a JSON-compatible dictionary."""
        return {'criterion': self.criterion,
                'description': self.description,
                'observed': self.observed,
                'expected': self.expected,
                'tolerance': self.tolerance,
                'relative': self.relative,
                'passed': self.passed,
                'error': self.error}

    def __repr__(self):
        return 'AcceptanceResult({!r}, observed={}, expected={}, passed={})' \
               ''.format(self.criterion, self.observed, self.expected,
                         self.passed)


def criterion_growth(q1=10 ** 4, q2=300, workers=1):
    """Counts of the full Farey sequences against their growth rates."""
    one = growth_check(1, q1, ResidueSystem(1), workers)
    two = growth_check(2, q2, ResidueSystem(2), workers)
    return [AcceptanceResult('1a', 'growth rate, n=1, Q={}'.format(q1),
                             one.ratio, 1, 0.005),
            AcceptanceResult('1b', 'growth rate, n=2, Q={}'.format(q2),
                             two.ratio, 1, 0.02)]


def criterion_density(Q=5000, workers=1):
    """Relative size of a restricted Farey sequence and exact orbit
    counts."""
    sys = ResidueSystem(1, 2, [(0, 1)])
    ratio = (count_farey(1, Q, sys, workers=workers) /
             count_farey(1, Q, ResidueSystem.full(1, 2), workers=workers))
    results = [AcceptanceResult('2a', 'restricted density, Q={}'.format(Q),
                                ratio, 1 / 3, 0.01, relative=True)]

    mismatches = 0
    for n, m in [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3)]:
        sys = ResidueSystem(n, m, [(0,) * n + (1,)])
        mismatches += astar_count(sys) != astar_bruteforce(sys)
    results.append(AcceptanceResult('2b', 'orbit counts against group '
                                          'enumeration', mismatches, 0, 0))
    return results


def criterion_neighbors(Q=2000):
    """Neighbour determinants and the smallest gap of the classical Farey
    sequence."""
    fset = enumerate_farey(1, Q)
    wrong = int(np.sum(neighbor_determinants(fset) != 1))
    return [AcceptanceResult('3a', 'neighbour determinants, Q={}'.format(Q),
                             wrong, 0, 0),
            AcceptanceResult('3b', 'smallest normalised gap',
                             gaps_1d(fset)[0], 3 / pi ** 2, 0.02,
                             relative=True)]


def criterion_spacing(Q=2000, samples=10 ** 5, seed=0, workers=1):
    """Mean window count against the volume of the window."""
    window = Box([0], [0.5])
    results = []
    for label, sys in [('4a', ResidueSystem(1)),
                       ('4b', ResidueSystem(1, 2, [(0, 1)]))]:
        fset = enumerate_farey(1, Q, sys)
        report = p_stat(fset, Box([0], [sys.m]), window, samples=samples,
                        seed=seed, workers=workers)
        results.append(AcceptanceResult(label,
                                        'spacing mean, m={}'.format(sys.m),
                                        report.mean, window.volume / sys.m,
                                        0.02))
    return results


def _equivalence_mismatches(kind, cases, seed):
    # Inequality against region membership of the pushed rows.
    generator = RandomStream(seed).generators(1)[0]
    mismatches = 0
    for n in (1, 2):
        Q = int(generator.integers(10, 200))
        params = DioParams(generator.uniform(0.5, 20), Q, ResidueSystem(n),
                           c=generator.uniform(1.1, 3))
        x = generator.uniform(0, 1, size=(cases, n))
        top = 3 * Q if kind == 'est' else 2 * Q
        q = generator.integers(1, top + 1, size=cases)
        p = np.round(q[:, None] * x) + generator.integers(-1, 2,
                                                          size=(cases, n))
        region = dio_region(kind, params)
        exact = satisfies(kind, params, x, p, q)
        inside = np.zeros(cases, dtype=bool)
        near = np.zeros(cases, dtype=bool)
        for i in range(cases):
            image = horosphere_image(np.append(p[i], q[i]), x[i], Q)
            inside[i] = region_contains(region, image)[0]
            near[i] = (region_contains(region, image, 1e-9)[0] and
                       not region_contains(region, image, -1e-9)[0])
        mismatches += int(np.sum((exact != inside) & ~near))
    return mismatches


def criterion_est(Q=2000, samples=10 ** 5, cases=10 ** 4, seed=0, workers=1):
    """Equivalence with the region and the mean of the EST count."""
    results = [AcceptanceResult('5a', 'EST inequality against region',
                                _equivalence_mismatches('est', cases, seed),
                                0, 0)]
    domain = Box([0], [1])
    full = DioParams(0.5, Q, ResidueSystem(1), c=2)
    report = dio_distribution('est', domain, full, samples=samples,
                              seed=seed, workers=workers)
    results.append(AcceptanceResult('5b', 'EST mean, m=1', report.mean,
                                    6 * ln(2) / pi ** 2, 0.03,
                                    relative=True))
    restricted = DioParams(0.5, Q, ResidueSystem(1, 2, [(0, 1)]), c=2)
    report = dio_distribution('est', domain, restricted, samples=samples,
                              seed=seed, workers=workers)
    results.append(AcceptanceResult('5c', 'EST mean, m=2', report.mean,
                                    predicted_mean('est', full) / 3, 0.05,
                                    relative=True))
    return results


def criterion_kesten(Q=2000, samples=10 ** 5, cases=10 ** 4, seed=0,
                     workers=1):
    """Equivalence with the region and the mean of the Kesten count."""
    params = DioParams(0.5, Q, ResidueSystem(1))
    report = dio_distribution('kesten', Box([0], [1]), params,
                              samples=samples, seed=seed, workers=workers)
    return [AcceptanceResult('6a', 'Kesten inequality against region',
                             _equivalence_mismatches('kesten', cases, seed),
                             0, 0),
            AcceptanceResult('6b', 'Kesten mean, m=1', report.mean,
                             6 / pi ** 2, 0.03, relative=True)]


def _random_primitive(generator, low, high, size):
    while True:
        a = [int(x) for x in generator.integers(low, high + 1, size=size)]
        if np.gcd.reduce(a) == 1:
            return a


def criterion_frobenius(pairs=1000, triples=500, seed=0):
    """Frobenius numbers against the closed form and a bitmap oracle."""
    generator = RandomStream(seed).generators(1)[0]
    wrong_pairs = 0
    for _ in range(pairs):
        a, b = _random_primitive(generator, 2, 10 ** 4, 2)
        wrong_pairs += frobenius_number([a, b]) != a * b - a - b
    wrong_triples = sum(frobenius_number(a) != frobenius_bruteforce(a)
                        for a in (_random_primitive(generator, 2, 100, 3)
                                  for _ in range(triples)))
    return [AcceptanceResult('7a', 'closed form for pairs', wrong_pairs, 0,
                             0),
            AcceptanceResult('7b', 'bitmap oracle for triples',
                             wrong_triples, 0, 0)]


def criterion_identity(pairs=20, triples=50, h=1e-3, seed=0):
    """Frobenius numbers against covering radii of the associated
    lattices."""
    generator = RandomStream(seed).generators(1)[0]
    worst_pair = max(identity_check(_random_primitive(generator, 2, 1000, 2))
                     for _ in range(pairs))
    worst_triple = 0.0
    for _ in range(triples):
        a = _random_primitive(generator, 2, 40, 3)
        residual = identity_check(a, h)
        worst_triple = max(worst_triple,
                           residual / (frobenius_number(a) + sum(a)))
    return [AcceptanceResult('8a', 'identity for pairs', worst_pair, 0,
                             1e-9),
            AcceptanceResult('8b', 'identity for triples, relative',
                             worst_triple, 0, 0.02)]


def criterion_census(T=150, workers=1):
    """Restricted and full censuses of normalised Frobenius numbers."""
    sys = ResidueSystem(2, 2, [(0, 0, 1)])
    report = frobenius_census(sys, Box([0, 0, 0], [1, 1, 1]), T, [0.0],
                              workers=workers, progress=True)
    return [AcceptanceResult('9a', 'census count ratio, T={}'.format(T),
                             report.count_ratio, report.density, 0.02,
                             relative=True),
            AcceptanceResult('9b', 'census KS distance', report.ks, 0,
                             0.02)]


def criterion_determinism(Q=200, samples=2000, seed=7):
    """Identical configurations give identical bytes."""
    fset = enumerate_farey(1, Q)
    domain, window = Box([0], [1]), Box([0], [1])
    first = dumps(p_stat(fset, domain, window, samples=samples, seed=seed,
                         batch_size=500))
    second = dumps(p_stat(fset, domain, window, samples=samples, seed=seed,
                          batch_size=500))
    parallel = dumps(p_stat(fset, domain, window, samples=samples, seed=seed,
                            batch_size=500, workers=2))
    params = DioParams(0.5, Q, ResidueSystem(1), c=2)
    dio = [dumps(dio_distribution('est', domain, params, samples=samples,
                                  seed=seed, batch_size=500))
           for _ in range(2)]
    differences = (first != second) + (first != parallel) + (dio[0] != dio[1])
    return [AcceptanceResult('10', 'byte-identical repeated runs',
                             differences, 0, 0)]


#: Criteria with the suites they belong to.
CRITERIA = [(criterion_growth, ('fast', 'full')),
            (criterion_density, ('fast', 'full')),
            (criterion_neighbors, ('fast', 'full')),
            (criterion_spacing, ('fast', 'full')),
            (criterion_est, ('fast', 'full')),
            (criterion_kesten, ('fast', 'full')),
            (criterion_frobenius, ('fast', 'full')),
            (criterion_identity, ('fast', 'full')),
            (criterion_census, ('full',)),
            (criterion_determinism, ('fast', 'full'))]

#: Names of the suites.
SUITES = ('fast', 'full')


def accept(suite='fast', workers=1):
    """Run an acceptance suite. A criterion which raises is reported as
    failed and the suite continues.

    Args:
        suite (str, optional): `fast` or `full`.
        workers (int, optional): Number of processes for the parallel
            criteria.

    Returns:
        list[:class:`.accept.AcceptanceResult`]: Results.
    """
    if suite not in SUITES:
        raise ValueError('Unknown suite "{}".'.format(suite))
    results = []
    for criterion, suites in CRITERIA:
        if suite not in suites:
            continue
        log.info('Running %s.', criterion.__name__)
        try:
            parameters = inspect.signature(criterion).parameters
            kwargs = {'workers': workers} if 'workers' in parameters else {}
            results.extend(criterion(**kwargs))
        except Exception as e:
            log.exception('%s failed.', criterion.__name__)
            results.append(AcceptanceResult(criterion.__name__,
                                            criterion.__doc__, None, 0, 0,
                                            error='{}: {}'.format(
                                                type(e).__name__, e)))
    for result in results:
        log.info('%s', result)
    return results
