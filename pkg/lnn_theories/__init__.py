# Copyright (C) 2023, CERN
# This software is distributed under the terms of the MIT
# licence, copied verbatim in the file "LICENSE".
# In applying this license, CERN does not waive the privileges and immunities
# granted to it by virtue of its status as Intergovernmental Organization
# or submit itself to any jurisdiction.

try:
    from ._version import version as __version__  # noqa
except ImportError:  # pragma: no cover
    __version__ = "0.0.0+unknown"

__all__ = ['__version__']
