"""Entry point for python -m dinilab."""

from dinilab.cli import main

if __name__ == "__main__":
    main()
