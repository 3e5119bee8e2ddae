"""Run the command line with `python -m dyadic_bellman`."""

from .cli import main

raise SystemExit(main())
