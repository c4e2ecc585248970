import pytest
from hypothesis import given
from hypothesis import strategies as st

from fatpoints.scheme import (
    GENERIC,
    ON_LINE,
    Configuration,
    Dime,
    FatPoint,
    Fixed,
    MonomialType,
    SchemeError,
    component_length,
    configuration_from_json,
    configuration_to_json,
    fat_staircase,
    residual_wrt_line,
    total_length,
    trace_on_line,
)


def test_component_lengths():
    assert component_length(FatPoint(2)) == 3
    assert component_length(FatPoint(1)) == 1
    assert component_length(MonomialType(frozenset({(0, 0), (1, 0), (0, 1), (2, 0)}))) == 4
    assert component_length(Dime()) == 2


def test_traces():
    assert trace_on_line(FatPoint(2, ON_LINE)) == 2
    assert trace_on_line(Dime()) == 2
    assert trace_on_line(FatPoint(5, ON_LINE)) == 5
    assert trace_on_line(FatPoint(3, Fixed(7, 0))) == 3
    assert trace_on_line(MonomialType(frozenset({(0, 0), (1, 0), (2, 0), (0, 1)}),
                                      placement=ON_LINE)) == 3


def test_trace_rejects_components_off_line():
    with pytest.raises(SchemeError):
        trace_on_line(FatPoint(2))
    with pytest.raises(SchemeError):
        trace_on_line(FatPoint(2, Fixed(1, 1)))


def test_residuals():
    assert residual_wrt_line(FatPoint(2, ON_LINE)) == FatPoint(1, ON_LINE)
    assert residual_wrt_line(FatPoint(1, ON_LINE)) is None
    assert residual_wrt_line(Dime()) is None
    assert residual_wrt_line(FatPoint(3)) == FatPoint(3)
    fixed = FatPoint(4, Fixed(5, 0))
    assert residual_wrt_line(fixed) == FatPoint(3, Fixed(5, 0))


def test_transverse_dime_leaves_a_point():
    d = Dime(direction=(1, 1))
    assert trace_on_line(d) == 1
    assert residual_wrt_line(d) == FatPoint(1, ON_LINE)


def test_monomial_type_residual_shifts_rows():
    s = MonomialType(frozenset({(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2)}), placement=ON_LINE)
    r = residual_wrt_line(s)
    assert r.staircase == frozenset({(0, 0), (1, 0), (0, 1)})
    assert r.placement == ON_LINE


def test_monomial_type_on_line_needs_aligned_frame():
    s = MonomialType(frozenset({(0, 0), (1, 0)}), frame=((1, 0), (1, 1)), placement=Fixed(3, 0))
    with pytest.raises(SchemeError):
        trace_on_line(s)
    with pytest.raises(SchemeError):
        residual_wrt_line(s)


def test_total_lengths():
    assert total_length(Configuration(4, (FatPoint(2),) * 5)) == 15
    assert total_length(Configuration(4)) == 0
    assert total_length(Configuration(5, (FatPoint(3),) + (FatPoint(2),) * 4)) == 18


def test_monomial_multiplicity():
    assert MonomialType(fat_staircase(4)).mult == 4
    assert MonomialType(frozenset({(0, 0), (1, 0), (2, 0)})).mult == 1
    assert MonomialType(frozenset({(0, 0), (1, 0), (0, 1), (2, 0)})).mult == 2


@pytest.mark.parametrize("bad", [
    lambda: FatPoint(0),
    lambda: MonomialType(frozenset({(1, 0)})),
    lambda: MonomialType(frozenset()),
    lambda: Dime(GENERIC),
    lambda: Dime(Fixed(1, 2)),
    lambda: Dime(direction=(0, 0)),
    lambda: Configuration(-1),
])
def test_invalid_components(bad):
    with pytest.raises(SchemeError):
        bad()


@st.composite
def staircases(draw, max_mult=6):
    # a staircase is a partition: non-increasing column heights
    heights = draw(st.lists(st.integers(1, max_mult), min_size=1, max_size=max_mult))
    heights = sorted(heights, reverse=True)
    return frozenset((i, j) for i, h in enumerate(heights) for j in range(h))


@given(staircases())
def test_staircase_residual_is_downward_closed_and_conserves_length(cells):
    c = MonomialType(cells, placement=ON_LINE)
    r = residual_wrt_line(c)
    rest = 0 if r is None else component_length(r)
    assert component_length(c) == trace_on_line(c) + rest
    if r is not None:
        MonomialType(r.staircase)  # raises unless downward-closed


@given(st.integers(1, 12))
def test_repeated_residual_of_fat_point_empties_it(m):
    c = FatPoint(m, ON_LINE)
    for _ in range(m):
        assert c is not None
        c = residual_wrt_line(c)
    assert c is None


@given(st.lists(st.integers(1, 6), max_size=8), st.lists(st.integers(1, 6), max_size=8))
def test_length_is_additive(a, b):
    za = Configuration(3, tuple(FatPoint(m) for m in a))
    zb = Configuration(3, tuple(FatPoint(m) for m in b))
    both = Configuration(3, za.components + zb.components)
    assert total_length(both) == total_length(za) + total_length(zb)


def test_configuration_json_counts_expand():
    doc = {"degree": 5, "components": [
        {"kind": "fat", "mult": 3},
        {"kind": "fat", "mult": 2, "count": 4, "placement": "generic"},
        {"kind": "dime", "placement": "online"},
        {"kind": "type", "staircase": [[0, 0], [1, 0]], "placement": {"fixed": [2, 0]},
         "frame": [[1, 0], [0, 1]]},
    ]}
    z = configuration_from_json(doc)
    assert z.degree == 5
    assert len(z) == 7
    assert z.components[1] == FatPoint(2)
    assert z.components[5] == Dime()
    assert z.components[6].placement == Fixed(2, 0)
    assert configuration_from_json(configuration_to_json(z)) == z


@pytest.mark.parametrize("doc, field", [
    ({"components": []}, "degree"),
    ({"degree": 2, "components": [{"kind": "fat"}]}, "components[0].mult"),
    ({"degree": 2, "components": [{"kind": "blob"}]}, "components[0].kind"),
    ({"degree": 2, "components": [{"kind": "fat", "mult": 2, "count": -1}]}, "components[0].count"),
    ({"degree": 2, "components": [{"kind": "fat", "mult": 2, "placement": "nowhere"}]},
     "components[0].placement"),
    ({"degree": 2, "components": [{"kind": "type", "staircase": [[1, 0]]}]}, "components[0]"),
    ({"degree": 2, "components": [{"kind": "dime", "placement": {"fixed": [1, 1]}}]},
     "components[0]"),
])
def test_malformed_json_names_the_field(doc, field):
    with pytest.raises(SchemeError, match=field.replace("[", r"\[").replace("]", r"\]")):
        configuration_from_json(doc)
