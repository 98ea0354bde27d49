# SPDX-License-Identifier: Apache-2.0
"""Brownian motion on the hyperellipsoid |x|^2 + y^2/c^2 = 1."""

from ._core import *  # noqa: F401,F403
from ._core import verify as _verify


def verify(suite, **settings):
    """Run a verification suite; keyword settings use the config-file keys."""
    def text(v):
        if isinstance(v, (list, tuple)):
            return ",".join(repr(float(x)) for x in v)
        return str(v)

    return _verify(suite, {k: text(v) for k, v in settings.items()})
