"""dinilab - numerical laboratory for Dini-type function spaces and the Euler equations."""

__version__ = "0.4.0"
__build__ = "dev"
