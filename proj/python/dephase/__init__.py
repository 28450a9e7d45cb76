"""Single-qubit pure dephasing under bang-bang dynamical decoupling."""

from _dephase import *  # noqa: F401,F403
from _dephase import __version__  # noqa: F401
