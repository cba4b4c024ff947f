"""
Shared utilities.

This module provides functionality used across the subpackages:
- logging setup for the command line
- thread-count configuration and an order-preserving parallel map
- JSON input/output helpers
"""

from .log_utils import configure_logging
from .parallel import worker_count, ordered_map
from .json_utils import file_sha256, load_json, dumps_report, dumps_tsv, to_jsonable

__all__ = [
    'configure_logging',
    'worker_count',
    'ordered_map',
    'file_sha256',
    'load_json',
    'dumps_report',
    'dumps_tsv',
    'to_jsonable',
]
