"""Drinfeld F_q[T]-module arithmetic and mod-l representation experiments."""

__version__ = "0.1.0"
