"""Exact checks of entanglement-assisted vs classical communication protocols."""

from .functions import GipInstance, PairInput, TripleInput, f, g, gip, gip_reduce, promise_f

__version__ = "0.1.0"

__all__ = ["GipInstance", "PairInput", "TripleInput", "f", "g", "gip", "gip_reduce", "promise_f"]
