"""Run the laboratory from the command line."""

from .cli import main

main()
