"""Allow `python -m kmc_traffic`."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())
