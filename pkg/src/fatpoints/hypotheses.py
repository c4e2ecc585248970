"""Numeric hypotheses of the vanishing theorems for general fat points.

All inequalities are evaluated in integers; halves are cleared by doubling.
Reports are plain dicts so they serialize as they are.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .scheme import forms_dimension


@dataclass(frozen=True)
class TheoremInstance:
    """Degree t, big multiplicities d_1..d_r, and e further double points."""

    t: int
    d: tuple = ()
    e: int = 0

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(self.d))
        if self.t < 1:
            raise ValueError("t must be at least 1")
        if self.e < 0:
            raise ValueError("e must be non-negative")
        if any(x < 1 for x in self.d):
            raise ValueError("multiplicities must be positive")

    @property
    def m(self) -> int:
        return max(self.d + (2,))

    @property
    def multiplicities(self) -> tuple:
        return self.d + (2,) * self.e

    @property
    def length(self) -> int:
        return sum(x * (x + 1) // 2 for x in self.multiplicities)


@dataclass(frozen=True)
class DimensionSequence:
    """h^0(X, H^j) for j = 0..t."""

    values: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def violations(self) -> list[str]:
        v = self.values
        out = []
        if not v or v[0] < 1:
            out.append("h0(H^0) must be at least 1")
        out += [f"not strictly increasing at j={j}"
                for j in range(2, len(v)) if v[j] <= v[j - 1]]
        return out


def p2_dimensions(t: int) -> DimensionSequence:
    return DimensionSequence(tuple(forms_dimension(j) for j in range(t + 1)))


def _report(checks: list[dict], violations: list[str] = (), **extra) -> dict:
    failed = [c["name"] for c in checks if not c["holds"]] + list(violations)
    return {"ok": not failed, "failed": failed, "checks": checks, **extra}


def _check(name: str, lhs: int, rhs: int) -> dict:
    return {"name": name, "lhs": lhs, "rhs": rhs, "holds": lhs >= rhs}


def _double_point_bound(e: int, m: int, t: int) -> dict:
    return _check("2e >= (m-1)(t-1)", 2 * e, (m - 1) * (t - 1))


def check_thm01(inst: TheoremInstance) -> dict:
    """Plane case with fat points: enough forms, and enough double points."""
    n_t = forms_dimension(inst.t)
    checks = [_check("n_t >= 1 + length", n_t, 1 + inst.length),
              _double_point_bound(inst.e, inst.m, inst.t)]
    return _report(checks, theorem="thm01", m=inst.m, length=inst.length)


def check_thm03(t: int, types: list, e: int) -> dict:
    """Plane case with arbitrary local types given as (length, multiplicity)."""
    if t < 1 or e < 0:
        raise ValueError("need t >= 1 and e >= 0")
    m = max([mult for _, mult in types] + [2])
    length = 3 * e + sum(n for n, _ in types)
    checks = [_check("n_t >= 1 + 3e + sum length(Z_i)", forms_dimension(t), 1 + length),
              _double_point_bound(e, m, t)]
    return _report(checks, theorem="thm03", m=m, length=length)


def _surface_checks(t: int, big: tuple, m: int, e: int, length: int,
                    dims: DimensionSequence) -> list[dict]:
    h = dims.values
    if len(h) < t + 1:
        raise ValueError(f"dimension sequence must cover j = 0..{t}, got {len(h)} values")
    checks = []
    for j in range(2, t + 1):
        excess = sum(max(di - t + j, 0) for di in big)
        checks.append({"name": f"jump at j={j}", "lhs": 2 * excess + 2 * m,
                       "rhs": h[j] - h[j - 1], "holds": 2 * excess + 2 * m <= h[j] - h[j - 1]})
    # the free index of the section count is read as j = t
    checks.append(_check("h[t] >= h[1] + length", h[t], h[1] + length))
    checks.append(_double_point_bound(e, m, t))
    return checks


def check_thm02(inst: TheoremInstance, dims: DimensionSequence) -> dict:
    """Arbitrary surface, given h^0(X, H^j) for j = 0..t."""
    checks = _surface_checks(inst.t, inst.d, inst.m, inst.e, inst.length, dims)
    return _report(checks, theorem="thm02", m=inst.m, length=inst.length,
                   interpretation=["section count taken at j = t"],
                   violations=dims.violations())


def check_thm04(t: int, types: list, e: int, dims: DimensionSequence,
                reading: str = "multiplicity") -> dict:
    """Arbitrary surface with local types given as (length, multiplicity).

    ``reading`` picks what plays the role of d_i in the jump bounds: the multiplicity of
    each type, or its length. In the section count the types contribute their lengths.
    """
    if reading not in ("multiplicity", "length"):
        raise ValueError("reading must be 'multiplicity' or 'length'")
    if t < 1 or e < 0:
        raise ValueError("need t >= 1 and e >= 0")
    m = max([mult for _, mult in types] + [2])
    big = tuple(mult if reading == "multiplicity" else n for n, mult in types)
    length = 3 * e + sum(n for n, _ in types)
    checks = _surface_checks(t, big, m, e, length, dims)
    return _report(checks, theorem="thm04", m=m, length=length,
                   interpretation=["section count taken at j = t", f"d_i read as {reading}"],
                   violations=dims.violations())
