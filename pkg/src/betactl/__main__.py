"""Allow running as `python -m betactl`."""

from betactl.main import main

main()
