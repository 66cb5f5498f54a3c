"""Gap eigenvalues of Dirac operators with a scalar shell interaction."""

import json

from ._shellspectra import *  # noqa: F401,F403
from ._shellspectra import asymptotics_report as _asymptotics_report

__version__ = "0.3.0"


def asymptotics(tau, m, R=1.0, jmax=10, order=16):
    """Sphere asymptotics report as a dict."""
    return json.loads(_asymptotics_report(tau, R, list(m), jmax, order))
