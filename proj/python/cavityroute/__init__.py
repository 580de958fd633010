"""Perfect routing of single excitations in cavity QED networks."""

from ._cavityroute import *  # noqa: F401,F403
from ._cavityroute import __doc__  # noqa: F401
