"""Zero-dimensional schemes in the plane as multisets of connected pieces.

The distinguished line D is ``{y = 0}`` in the affine chart ``z = 1``.
Every component carries a placement: generic, a generic point of D, or
fixed affine coordinates over the working field.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Union


class SchemeError(ValueError):
    """Invalid component, configuration or placement."""


@dataclass(frozen=True)
class Generic:
    """Support drawn at random (off D) per trial."""


@dataclass(frozen=True)
class OnLine:
    """Support at a random point of D per trial."""


@dataclass(frozen=True)
class Fixed:
    x: int
    y: int


Placement = Union[Generic, OnLine, Fixed]

GENERIC = Generic()
ON_LINE = OnLine()


def on_line(placement: Placement) -> bool:
    if isinstance(placement, OnLine):
        return True
    return isinstance(placement, Fixed) and placement.y == 0


@dataclass(frozen=True)
class FatPoint:
    mult: int
    placement: Placement = GENERIC

    def __post_init__(self):
        if not isinstance(self.mult, int) or self.mult < 1:
            raise SchemeError(f"multiplicity must be a positive integer, got {self.mult!r}")


@dataclass(frozen=True)
class Dime:
    """Length-2 curvilinear scheme at a point of D.

    ``direction`` is the tangent vector; the default ``(1, 0)`` lies along D.
    """

    placement: Placement = ON_LINE
    direction: tuple[int, int] = (1, 0)

    def __post_init__(self):
        if not on_line(self.placement):
            raise SchemeError("a dime must be supported on the line D")
        if tuple(self.direction) == (0, 0):
            raise SchemeError("dime direction must be nonzero")


Frame = tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class MonomialType:
    """Scheme with monomial local ideal, given by its staircase.

    Local coordinates ``(s, w)`` at the support P are related to the affine
    ones by ``(x, y) = P + frame @ (s, w)``. ``frame=None`` means a fresh
    random invertible frame per trial (aligned with D when on D). A frame is
    aligned when ``frame[1][0] == 0``, i.e. the local axis ``{w = 0}`` maps
    into D.
    """

    staircase: frozenset
    frame: Frame | None = None
    placement: Placement = GENERIC

    def __post_init__(self):
        cells = frozenset((int(i), int(j)) for i, j in self.staircase)
        object.__setattr__(self, "staircase", cells)
        if not cells:
            raise SchemeError("staircase must be non-empty")
        for i, j in cells:
            if i < 0 or j < 0:
                raise SchemeError(f"staircase cell {(i, j)} has a negative entry")
            if (i > 0 and (i - 1, j) not in cells) or (j > 0 and (i, j - 1) not in cells):
                raise SchemeError("staircase is not downward-closed")
        if self.frame is not None:
            frame = tuple(tuple(int(v) for v in row) for row in self.frame)
            if len(frame) != 2 or any(len(row) != 2 for row in frame):
                raise SchemeError("frame must be a 2x2 matrix")
            object.__setattr__(self, "frame", frame)

    @property
    def mult(self) -> int:
        """Smallest degree of a monomial outside the staircase."""
        k = 0
        while all((i, k - i) in self.staircase for i in range(k + 1)):
            k += 1
        return k

    @property
    def aligned(self) -> bool:
        return self.frame is None or self.frame[1][0] == 0


Component = Union[FatPoint, Dime, MonomialType]


def fat_staircase(m: int) -> frozenset:
    return frozenset((i, j) for i in range(m) for j in range(m - i))


def multiplicity(c: Component) -> int:
    if isinstance(c, FatPoint):
        return c.mult
    if isinstance(c, Dime):
        return 1
    return c.mult


def component_length(c: Component) -> int:
    if isinstance(c, FatPoint):
        return c.mult * (c.mult + 1) // 2
    if isinstance(c, Dime):
        return 2
    return len(c.staircase)


def _dime_tangent_to_line(c: Dime) -> bool:
    return c.direction[1] == 0


def trace_on_line(c: Component) -> int:
    """Degree of the divisor ``c ∩ D`` on D."""
    if not on_line(c.placement):
        raise SchemeError("trace is only defined for components supported on D")
    if isinstance(c, FatPoint):
        return c.mult
    if isinstance(c, Dime):
        return 2 if _dime_tangent_to_line(c) else 1
    if not c.aligned:
        raise SchemeError("monomial type on D needs an aligned frame")
    return sum(1 for _, j in c.staircase if j == 0)


def residual_wrt_line(c: Component) -> Component | None:
    """Residual scheme with ideal ``(I_c : I_D)``; ``None`` when empty."""
    if not on_line(c.placement):
        return c
    if isinstance(c, FatPoint):
        return replace(c, mult=c.mult - 1) if c.mult > 1 else None
    if isinstance(c, Dime):
        # a dime transverse to D leaves its reduced point behind
        return None if _dime_tangent_to_line(c) else FatPoint(1, c.placement)
    if not c.aligned:
        raise SchemeError("monomial type on D needs an aligned frame")
    rest = frozenset((i, j - 1) for i, j in c.staircase if j > 0)
    return replace(c, staircase=rest) if rest else None


@dataclass(frozen=True)
class Configuration:
    degree: int
    components: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 0:
            raise SchemeError(f"degree must be a non-negative integer, got {self.degree!r}")
        object.__setattr__(self, "components", tuple(self.components))

    def __len__(self):
        return len(self.components)


def total_length(z: Configuration) -> int:
    return sum(component_length(c) for c in z.components)


def forms_dimension(t: int) -> int:
    """Dimension of the space of plane curves of degree t, (t+1)(t+2)/2."""
    return (t + 1) * (t + 2) // 2 if t >= 0 else 0


# --- JSON ------------------------------------------------------------------

def _placement_from_json(raw, where: str) -> Placement:
    if raw is None or raw == "generic":
        return GENERIC
    if raw == "online":
        return ON_LINE
    if isinstance(raw, dict) and set(raw) == {"fixed"}:
        xy = raw["fixed"]
        if (not isinstance(xy, list) or len(xy) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in xy)):
            raise SchemeError(f"{where}.placement.fixed must be a pair of integers")
        return Fixed(xy[0], xy[1])
    raise SchemeError(f"{where}.placement must be 'generic', 'online' or {{'fixed': [a, b]}}")


def _int_field(doc: dict, key: str, where: str, default=None) -> int:
    value = doc.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemeError(f"{where}.{key} must be an integer")
    return value


def component_from_json(item: dict, where: str = "component") -> Component:
    if not isinstance(item, dict):
        raise SchemeError(f"{where} must be an object")
    kind = item.get("kind")
    placement = _placement_from_json(item.get("placement"), where)
    if kind == "fat":
        mult = _int_field(item, "mult", where)
        if mult < 1:
            raise SchemeError(f"{where}.mult must be positive")
        return FatPoint(mult, placement)
    if kind == "dime":
        if "placement" not in item:
            placement = ON_LINE
        direction = item.get("direction", [1, 0])
        if not (isinstance(direction, list) and len(direction) == 2
                and all(isinstance(v, int) for v in direction)):
            raise SchemeError(f"{where}.direction must be a pair of integers")
        try:
            return Dime(placement, tuple(direction))
        except SchemeError as exc:
            raise SchemeError(f"{where}: {exc}") from None
    if kind == "type":
        cells = item.get("staircase")
        if (not isinstance(cells, list)
                or not all(isinstance(c, list) and len(c) == 2 for c in cells)):
            raise SchemeError(f"{where}.staircase must be a list of [i, j] pairs")
        frame = item.get("frame", "generic")
        if frame == "generic":
            frame = None
        elif not (isinstance(frame, list) and len(frame) == 2):
            raise SchemeError(f"{where}.frame must be 'generic' or a 2x2 matrix")
        try:
            return MonomialType(frozenset(map(tuple, cells)), frame, placement)
        except SchemeError as exc:
            raise SchemeError(f"{where}: {exc}") from None
    raise SchemeError(f"{where}.kind must be one of 'fat', 'dime', 'type'")


def configuration_from_json(doc: dict) -> Configuration:
    """Parse the configuration document; ``count`` expands into copies."""
    if not isinstance(doc, dict):
        raise SchemeError("configuration must be a JSON object")
    degree = _int_field(doc, "degree", "configuration")
    if degree < 0:
        raise SchemeError("configuration.degree must be non-negative")
    items = doc.get("components", [])
    if not isinstance(items, list):
        raise SchemeError("configuration.components must be a list")
    components = []
    for k, item in enumerate(items):
        where = f"components[{k}]"
        c = component_from_json(item, where)
        count = _int_field(item, "count", where, default=1)
        if count < 0:
            raise SchemeError(f"{where}.count must be non-negative")
        components.extend([c] * count)
    return Configuration(degree, tuple(components))


def _placement_to_json(p: Placement):
    if isinstance(p, Fixed):
        return {"fixed": [p.x, p.y]}
    return "online" if isinstance(p, OnLine) else "generic"


def component_to_json(c: Component) -> dict:
    out: dict = {"placement": _placement_to_json(c.placement)}
    if isinstance(c, FatPoint):
        out.update(kind="fat", mult=c.mult)
    elif isinstance(c, Dime):
        out.update(kind="dime", direction=list(c.direction))
    else:
        out.update(kind="type", staircase=[list(x) for x in sorted(c.staircase)],
                   frame="generic" if c.frame is None else [list(r) for r in c.frame])
    return out


def configuration_to_json(z: Configuration) -> dict:
    return {"degree": z.degree,
            "components": [dict(component_to_json(c), count=1) for c in z.components]}
