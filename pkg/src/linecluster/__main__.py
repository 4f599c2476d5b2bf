"""Allow ``python -m linecluster`` to run the command-line interface."""

from .cli import main

main()
