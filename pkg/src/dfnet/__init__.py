"""Direction finding from switched-antenna power measurements with an SDAE-DNN classifier."""

__version__ = "0.1.0"
