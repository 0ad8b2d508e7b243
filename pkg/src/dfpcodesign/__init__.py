"""Cycle-accounted simulator for software-hardware co-designed decimal multiplication."""

__version__ = "0.1.0"
