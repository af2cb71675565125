# SPDX-License-Identifier: Apache-2.0

"""Overhead-aware element-count and phase optimization for RIS-assisted links."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
