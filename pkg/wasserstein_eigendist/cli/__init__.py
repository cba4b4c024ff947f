"""
Command-line interface.
"""

from .cli import run, main, build_parser, report_schema_version, SCHEMA_VERSION

__all__ = [
    'run',
    'main',
    'build_parser',
    'report_schema_version',
    'SCHEMA_VERSION',
]
