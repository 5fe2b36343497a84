"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``BOXPUSH_PURE_PYTHON=1`` to force the pure implementation (used by the
equivalence tests and the benchmark).
"""

import os

from . import pyloops

if os.environ.get("BOXPUSH_PURE_PYTHON"):
    active = pyloops
else:
    try:
        from . import _fastloops as active  # type: ignore[no-redef]
    except ImportError:
        active = pyloops

OUTCOME_SUCCESS = pyloops.OUTCOME_SUCCESS
OUTCOME_COLLISION = pyloops.OUTCOME_COLLISION
OUTCOME_TIMEOUT = pyloops.OUTCOME_TIMEOUT


def implementation_name() -> str:
    return active.IMPLEMENTATION


def bmd_batch(pdls, keys_u, action_u, step_scale):
    return active.bmd_batch(pdls, keys_u, action_u, step_scale)


def run_episode_steps(*args, **kwargs):
    return active.run_episode_steps(*args, **kwargs)
