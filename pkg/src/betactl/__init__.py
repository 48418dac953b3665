"""betactl: Beta and Gamma from their functional equations."""

__version__ = "0.1.0"
