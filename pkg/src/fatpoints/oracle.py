"""Conditions matrices and h^0 / h^1 of twisted ideal sheaves on P^2.

A component at P imposes the vanishing of some Taylor coefficients of a
degree-t polynomial at P. Divided-power coefficients are used, so every
entry is an integer polynomial in the point coordinates and no factorial is
ever inverted; this needs ``p > t``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import asdict, dataclass, replace
from math import comb

import numpy as np

from .ff import DEFAULT_PRIME, PrimeField, child_seed, make_rng, random_element, rank
from .scheme import (
    Configuration,
    Dime,
    FatPoint,
    Fixed,
    Generic,
    MonomialType,
    OnLine,
    SchemeError,
    forms_dimension,
    on_line,
    total_length,
)

DEFAULT_TRIALS = 3


class Verdict(str, enum.Enum):
    MAXIMAL_RANK = "maximal_rank"
    SPECIAL = "special"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CohomologyReport:
    t: int
    n_t: int
    length: int
    rank: int
    h0: int
    h1: int
    trials_used: int
    seed: int
    prime: int
    verdict: Verdict
    ranks: tuple = ()

    def to_json(self) -> dict:
        out = asdict(self)
        out["verdict"] = self.verdict.value
        out["ranks"] = list(self.ranks)
        return out


def monomials(t: int) -> list[tuple[int, int]]:
    """Exponents (u, v) of x^u y^v with u + v <= t: 1, x, y, x^2, xy, y^2, ..."""
    return [(u, d - u) for d in range(t + 1) for u in range(d, -1, -1)]


def expected_counts(z: Configuration, t: int | None = None) -> tuple[int, int, int, int]:
    t = z.degree if t is None else t
    n_t = forms_dimension(t)
    length = total_length(z)
    return n_t, length, max(0, n_t - length), max(0, length - n_t)


# --- materialization -------------------------------------------------------

def _support(c) -> tuple[int, int] | None:
    return (c.placement.x, c.placement.y) if isinstance(c.placement, Fixed) else None


def _random_frame(rng: random.Random, field: PrimeField, aligned: bool):
    p = field.p
    while True:
        a = random_element(rng, field, avoid=(0,))
        b = random_element(rng, field)
        c = 0 if aligned else random_element(rng, field)
        d = random_element(rng, field, avoid=(0,))
        if (a * d - b * c) % p:
            return ((a, b), (c, d))


def materialize(z: Configuration, rng: random.Random, field: PrimeField) -> Configuration:
    """Draw coordinates for every Generic/OnLine placement and random frames.

    Generic points are kept off D; all supports are pairwise distinct.
    """
    p = field.p
    used = {_support(c) for c in z.components} - {None}
    out = []
    for c in z.components:
        pl = c.placement
        if isinstance(pl, Generic):
            while True:
                xy = (random_element(rng, field), random_element(rng, field, avoid=(0,)))
                if xy not in used:
                    break
        elif isinstance(pl, OnLine):
            taken = {x for x, y in used if y == 0}
            xy = (random_element(rng, field, avoid=taken), 0)
        else:
            xy = (pl.x % p, pl.y % p)
        used.add(xy)
        c = replace(c, placement=Fixed(*xy))
        if isinstance(c, MonomialType) and c.frame is None:
            c = replace(c, frame=_random_frame(rng, field, aligned=on_line(c.placement)))
        out.append(c)
    return Configuration(z.degree, tuple(out))


# --- conditions ------------------------------------------------------------

class _TaylorRows:
    """Divided-power Taylor coefficient rows at one point, for degree t."""

    def __init__(self, a: int, b: int, t: int, p: int):
        self.t, self.p = t, p
        self.apow = [pow(a, k, p) for k in range(t + 1)]
        self.bpow = [pow(b, k, p) for k in range(t + 1)]
        self.cols = monomials(t)

    def row(self, i: int, j: int) -> list[int]:
        ap, bp, p = self.apow, self.bpow, self.p
        return [comb(u, i) * ap[u - i] * comb(v, j) * bp[v - j] % p
                if u >= i and v >= j else 0
                for u, v in self.cols]


def _mul_trunc(f: np.ndarray, g: np.ndarray, p: int) -> np.ndarray:
    h = np.zeros_like(f)
    ni, nj = f.shape
    for i, j in zip(*np.nonzero(f)):
        h[i:, j:] += f[i, j] * g[:ni - i, :nj - j]
    return h % p


def _monomial_type_rows(c: MonomialType, t: int, p: int) -> list[list[int]]:
    """Coefficients of s^i w^j, (i, j) in the staircase, of each monomial
    x^u y^v after substituting (x, y) = P + frame (s, w)."""
    a, b = c.placement.x, c.placement.y
    (f00, f01), (f10, f11) = c.frame
    ni = 1 + max(i for i, _ in c.staircase)
    nj = 1 + max(j for _, j in c.staircase)

    def linear(const, ds, dw):
        f = np.zeros((ni, nj), dtype=object)
        f[0, 0] = const % p
        if ni > 1:
            f[1, 0] = ds % p
        if nj > 1:
            f[0, 1] = dw % p
        return f

    one = np.zeros((ni, nj), dtype=object)
    one[0, 0] = 1
    xs, ys = [one], [one]
    lx, ly = linear(a, f00, f01), linear(b, f10, f11)
    for _ in range(t):
        xs.append(_mul_trunc(xs[-1], lx, p))
        ys.append(_mul_trunc(ys[-1], ly, p))
    cells = sorted(c.staircase, key=lambda ij: (ij[0] + ij[1], -ij[0]))
    cols = [_mul_trunc(xs[u], ys[v], p) for u, v in monomials(t)]
    return [[int(col[i, j]) for col in cols] for i, j in cells]


def check_modulus(t: int, field: PrimeField) -> None:
    if field.p <= t:
        raise SchemeError(f"modulus must exceed degree (p={field.p}, t={t})")


def build_conditions_matrix(z: Configuration, t: int | None = None,
                            field: PrimeField | None = None) -> np.ndarray:
    """Rows are the conditions imposed by ``z`` on degree-t forms.

    Every placement must already be Fixed (see :func:`materialize`).
    """
    field = field or PrimeField()
    t = z.degree if t is None else t
    check_modulus(t, field)
    p = field.p
    seen = set()
    rows: list[list[int]] = []
    for c in z.components:
        if not isinstance(c.placement, Fixed):
            raise SchemeError("build_conditions_matrix needs Fixed placements; materialize first")
        a, b = c.placement.x % p, c.placement.y % p
        if (a, b) in seen:
            raise SchemeError(f"coincident support points at {(a, b)}")
        seen.add((a, b))
        if isinstance(c, FatPoint):
            taylor = _TaylorRows(a, b, t, p)
            rows.extend(taylor.row(i, d - i) for d in range(c.mult) for i in range(d, -1, -1))
        elif isinstance(c, Dime):
            taylor = _TaylorRows(a, b, t, p)
            dx, dy = c.direction
            rx, ry = taylor.row(1, 0), taylor.row(0, 1)
            rows.append(taylor.row(0, 0))
            rows.append([(dx * u + dy * v) % p for u, v in zip(rx, ry)])
        elif isinstance(c, MonomialType):
            if c.frame is None:
                raise SchemeError("monomial type needs an explicit frame; materialize first")
            (f00, f01), (f10, f11) = c.frame
            if (f00 * f11 - f01 * f10) % p == 0:
                raise SchemeError("monomial type frame is not invertible")
            if b == 0 and f10 % p != 0:
                raise SchemeError("monomial type on D needs an aligned frame")
            rows.extend(_monomial_type_rows(replace(c, placement=Fixed(a, b)), t, p))
        else:
            raise SchemeError(f"unknown component {c!r}")
    ncols = forms_dimension(t)
    m = np.zeros((len(rows), ncols), dtype=object)
    if rows:
        m[:, :] = rows
    return m


def compute_cohomology(z: Configuration, t: int | None = None, prime: int = DEFAULT_PRIME,
                       trials: int = DEFAULT_TRIALS, seed: int = 0) -> CohomologyReport:
    """Generic h^0 and h^1 of I_Z(t), certified by semicontinuity.

    One trial reaching ``min(n_t, length)`` settles the generic value. A
    ``SPECIAL`` verdict only says the rank was deficient, and equal, at every
    sampled configuration over F_p.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    field = PrimeField(prime)
    t = z.degree if t is None else t
    check_modulus(t, field)
    n_t, length, _, _ = expected_counts(z, t)
    target = min(n_t, length)
    ranks = []
    for k in range(trials):
        concrete = materialize(z, make_rng(child_seed(seed, "trial", k)), field)
        ranks.append(rank(build_conditions_matrix(concrete, t, field), field))
        if ranks[-1] == target:
            break
    best = max(ranks)
    if best == target:
        verdict = Verdict.MAXIMAL_RANK
    elif len(set(ranks)) == 1:
        verdict = Verdict.SPECIAL
    else:
        verdict = Verdict.INCONCLUSIVE
    return CohomologyReport(t=t, n_t=n_t, length=length, rank=best, h0=n_t - best,
                            h1=length - best, trials_used=len(ranks), seed=seed,
                            prime=prime, verdict=verdict, ranks=tuple(ranks))
