"""
Main entrypoint module for the lplab CLI
"""

from lplab_py.cli.cli import cli as main

if __name__ == "__main__":
    main()
