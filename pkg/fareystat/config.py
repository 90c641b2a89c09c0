import logging
import os

import numpy as np

from .congruence import ResidueSystem
from .region import Box, Ball
from .util import ValidationError

__all__ = ['OUTPUT_DIR_VARIABLE',
           'RunConfig',
           'parse_row',
           'parse_classes',
           'parse_test_set',
           'parse_rgrid',
           'resolve_output']

log = logging.getLogger(__name__)

#: Environment variable with the default directory for relative outputs.
OUTPUT_DIR_VARIABLE = 'FAREYSTAT_OUTPUT_DIR'

# Actions per command.
_ACTIONS = {'farey': ('count', 'list', 'growth'),
            'stats': ('p', 'p0', 'equi'),
            'dio': ('est', 'kesten'),
            'frob': ('number', 'lattice', 'identity', 'census'),
            'congr': ('astar', 'brute'),
            'accept': ('fast', 'full')}


def parse_row(text, field='--a'):
    """Parse a comma-separated integer row such as `6,9,20`.

    Args:
        text (str): Row.
        field (str, optional): Flag reported on errors.

    Returns:
        tuple[int]: Entries.
    """
    try:
        return tuple(int(x) for x in text.split(','))
    except ValueError:
        raise ValidationError(field, 'cannot parse integer row "{}"'
                                     ''.format(text))


def parse_classes(texts):
    """Parse repeated `--class` flags.

    Args:
        texts (list[str]): Rows such as `0,1`.

    Returns:
        list[tuple[int]]: Class rows.
    """
    return [parse_row(text, '--class') for text in texts or ()]


def _floats(text, field):
    try:
        return [float(x) for x in text.split(',')]
    except ValueError:
        raise ValidationError(field, 'cannot parse numbers "{}"'.format(text))


def parse_test_set(text, field='--window'):
    """Parse a box `box:l1,u1;l2,u2` or a ball `ball:c1,c2;r`. Without a
    prefix a box is assumed.

    Args:
        text (str): Specification.
        field (str, optional): Flag reported on errors.

    Returns:
        :class:`.region.TestSet`: Test set.
    """
    shape, _, body = text.rpartition(':')
    shape = shape or 'box'
    parts = [part for part in body.split(';') if part.strip()]
    try:
        if shape == 'box':
            bounds = [_floats(part, field) for part in parts]
            if not bounds or any(len(b) != 2 for b in bounds):
                raise ValidationError(field, 'a box needs "lower,upper" per '
                                             'dimension')
            return Box([b[0] for b in bounds], [b[1] for b in bounds])
        elif shape == 'ball':
            if len(parts) != 2:
                raise ValidationError(field, 'a ball needs "center;radius"')
            return Ball(_floats(parts[0], field), _floats(parts[1], field)[0])
        else:
            raise ValidationError(field, 'unknown shape "{}"'.format(shape))
    except ValidationError as e:
        # Report the flag rather than the shape.
        raise ValidationError(field, e.message)


def parse_rgrid(text):
    """Parse a grid `start:stop:step` including its end point.

    Args:
        text (str): Specification.

    Returns:
        vector: Grid.
    """
    try:
        start, stop, step = (float(x) for x in text.split(':'))
    except ValueError:
        raise ValidationError('--rgrid', 'expected start:stop:step')
    if step <= 0 or stop < start:
        raise ValidationError('--rgrid', 'needs step > 0 and stop >= start')
    num = int(np.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(num), 12)


def resolve_output(path):
    """Place a relative output path in the default output directory, if one
    is configured.

    Args:
        path (str or None): Path.

    Returns:
        str or None: Resolved path.
    """
    directory = os.environ.get(OUTPUT_DIR_VARIABLE)
    if path is None or os.path.isabs(path) or not directory:
        return path
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, path)


class RunConfig:
    """Configuration of one run of the command-line tool.

    Args:
        command (str): One of `farey`, `stats`, `dio`, `frob`, `congr` and
            `accept`.
        action (str): Action of the command, e.g. `count` or `census`.
        **params: Parameters of the action. Missing parameters take their
            defaults.
    """

    defaults = {'n': 1,
                'q': None,
                'modulus': 1,
                'classes': (),
                'window': None,
                'domain': None,
                'samples': 10 ** 5,
                'seed': 0,
                'kmax': 16,
                'scaling': 'count',
                'alpha': None,
                'c': None,
                'a': None,
                't': None,
                'rgrid': '0:3:0.05',
                'h': 1e-3,
                'out': None,
                'format': None,
                'workers': 1,
                'batch_size': 10 ** 4}

    def __init__(self, command, action, **params):
        unknown = set(params) - set(self.defaults)
        if unknown:
            raise ValueError('Unknown parameters {}.'.format(sorted(unknown)))
        self.command = command
        self.action = action
        for name, default in self.defaults.items():
            setattr(self, name, params.get(name, default))
        self.classes = tuple(tuple(c) for c in self.classes)

    @classmethod
    def from_args(cls, args):
        """Build a configuration from parsed command-line arguments.

        Args:
            args (:class:`argparse.Namespace`): Arguments.

        Returns:
            :class:`.config.RunConfig`: Configuration.
        """
        params = {name: getattr(args, name) for name in cls.defaults
                  if name not in {'classes', 'a'} and
                  getattr(args, name, None) is not None}
        params['classes'] = parse_classes(getattr(args, 'classes', None))
        if getattr(args, 'a', None) is not None:
            params['a'] = parse_row(args.a)
        return cls(args.command, args.action, **params)

    def validate(self):
        """Check the parameters.

        Raises:
            :class:`.util.ValidationError`: Names every offending flag.
        """
        errors = []

        def require(name, condition, message):
            if not condition:
                errors.append(('--' + name, message))

        require('command', self.command in _ACTIONS,
                'unknown command "{}"'.format(self.command))
        if self.command in _ACTIONS:
            require('action', self.action in _ACTIONS[self.command],
                    'unknown action "{}"'.format(self.action))
        require('n', self.n >= 1, 'must be at least one')
        require('modulus', self.modulus >= 1, 'must be at least one')
        require('class', self.modulus == 1 or self.classes,
                'at least one class is required when --modulus > 1')
        require('seed', 0 <= self.seed < 2 ** 64,
                'must be a 64-bit unsigned integer')
        require('samples', self.samples >= 1, 'must be at least one')
        require('kmax', self.kmax >= 0, 'must be nonnegative')
        require('workers', self.workers >= 1, 'must be at least one')
        require('format', self.format in (None, 'json', 'csv'),
                'must be json or csv')

        if self.command in ('farey', 'stats', 'dio'):
            require('q', self.q is not None and self.q >= 1,
                    'must be at least one')
        if self.command == 'stats':
            require('window', self.window is not None, 'is required')
            require('scaling', self.scaling in ('count', 'sigma'),
                    'must be count or sigma')
        if self.command == 'dio':
            require('alpha', self.alpha is not None and self.alpha > 0,
                    'must be positive')
            if self.action == 'est':
                require('c', self.c is not None and self.c > 1,
                        'must exceed one')
        if self.command == 'frob':
            if self.action == 'census':
                require('t', self.t is not None and self.t >= 1,
                        'must be at least one')
                require('n', self.n >= 2, 'the census requires n >= 2')
            else:
                require('a', self.a is not None, 'is required')
            require('h', self.h > 0, 'must be positive')

        if errors:
            raise ValidationError(', '.join(field for field, _ in errors),
                                  '; '.join('{} {}'.format(field, message)
                                            for field, message in errors))
        # Let the residue system check the class rows.
        self.residue_system()
        return self

    def residue_system(self):
        """The residue system given by `--modulus` and `--class`.

        Returns:
            :class:`.congruence.ResidueSystem`: Residue system.
        """
        return ResidueSystem(self.n, self.modulus, self.classes)

    def test_set(self, name, default=None):
        """Parse one of the test-set parameters.

        Args:
            name (str): `window` or `domain`.
            default (:class:`.region.TestSet`, optional): Used when the
                parameter is not set.

        Returns:
            :class:`.region.TestSet`: Test set.
        """
        text = getattr(self, name)
        if text is None:
            return default
        return parse_test_set(text, '--' + name)

    def output_format(self):
        """Format of the output: `csv` or `json`."""
        if self.format is not None:
            return self.format
        if self.out is not None and self.out.endswith('.csv'):
            return 'csv'
        return 'json'

    def __repr__(self):
        return 'RunConfig({!r}, {!r})'.format(self.command, self.action)
