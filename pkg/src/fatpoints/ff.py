"""Exact dense linear algebra over a prime field F_p.

Matrices are numpy arrays of dtype ``object`` holding Python ints, so
products of 62-bit residues never overflow.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from sympy import isprime

#: Largest prime below 2**62.
DEFAULT_PRIME = 4611686018427387847


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.p < 2 or not isprime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def reduce(self, x: int) -> int:
        return x % self.p

    def inv(self, x: int) -> int:
        return pow(x, -1, self.p)


def as_matrix(entries, field: PrimeField) -> np.ndarray:
    """Copy ``entries`` into a 2-D object array reduced mod p."""
    a = np.array(entries, dtype=object)
    if a.ndim == 1 and a.size == 0:
        a = a.reshape(0, 0)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    return a % field.p if a.size else a


def rank(m, field: PrimeField) -> int:
    """Rank over F_p by fraction-free Gaussian elimination.

    The pivot in each column is the first nonzero entry at or below the
    current row. Rows below are updated as ``pivot * row - lead * pivot_row``
    so no inverses are needed.
    """
    p = field.p
    a = as_matrix(m, field)
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        below = r + 1 + np.flatnonzero(a[r + 1:, c])
        if below.size:
            lead = a[below, c]
            a[below, c + 1:] = (a[r, c] * a[below, c + 1:]
                                - np.outer(lead, a[r, c + 1:])) % p
            a[below, c] = 0
        r += 1
    return r


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def child_seed(seed: int, *keys) -> int:
    """Derive an independent 64-bit seed from ``seed`` and a key path."""
    text = ":".join(str(k) for k in (seed, *keys)).encode()
    return int.from_bytes(hashlib.blake2b(text, digest_size=8).digest(), "big")


def random_element(rng: random.Random, field: PrimeField,
                   avoid: Iterable[int] = ()) -> int:
    """Uniform draw from F_p, redrawn while it lands in ``avoid``."""
    forbidden = set(avoid)
    if len(forbidden) >= field.p:
        raise ValueError("forbidden set covers the whole field")
    while True:
        x = rng.randrange(field.p)
        if x not in forbidden:
            return x
