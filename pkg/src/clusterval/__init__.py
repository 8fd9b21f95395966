# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

try:
    from clusterval._version import __version__
except ImportError:  # source checkout, not built yet
    __version__ = "0.0.0"

__all__ = ["__version__"]
