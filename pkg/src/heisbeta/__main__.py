"""Module entry point: python -m heisbeta."""

from .cli import main

main()
