from lab import B

from .util import *
from .special import *
from .lattice import *
from .region import *
from .congruence import *
from .farey import *
from .random import *
from .spacing import *
from .diophantine import *
from .frobenius import *
from .report import *
from .config import *
from .accept import *
from .cli import *
