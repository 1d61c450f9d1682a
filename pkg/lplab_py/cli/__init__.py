"""
CLI package for lplab
"""

from lplab_py.cli.cli import cli

__all__ = ['cli']
