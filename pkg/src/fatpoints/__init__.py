"""Postulation of general fat points in P^2 over a prime field, and
Horace-method derivations of their vanishing theorems."""

__version__ = "0.1.0"
