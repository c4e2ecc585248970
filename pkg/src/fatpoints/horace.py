"""Horace-method derivations of h^1(I_Z(t)) = 0 on P^2, with checkable traces.

Every step works against the fixed line D = {y = 0} in degree t':

* components are specialized onto D until the trace on D has degree t'+1
  (or t' when a differential step follows);
* the residual with respect to D is handed down to degree t'-1.

With trace degree t' + 1 the ordinary Horace lemma applies. With trace
degree t', one general double point 2Q is placed with Q on D: it adds the
reduced point Q to the trace and leaves a dime (the length-2 subscheme of D
at Q) in the residual.

If the remaining components cannot fill the trace, general simple points
("fillers") may be specialized onto D. Proving h^1 = 0 for a larger scheme
proves it for the original one, so this is sound as long as the length stays
within the dimension of the forms; the budget is ``n_t' - length``.

A step never needs randomness; the oracle checks draw from the run seed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .ff import DEFAULT_PRIME, child_seed
from .oracle import DEFAULT_TRIALS, Verdict, compute_cohomology
from .scheme import (
    ON_LINE,
    Component,
    Configuration,
    Dime,
    FatPoint,
    Fixed,
    MonomialType,
    SchemeError,
    component_from_json,
    component_length,
    component_to_json,
    configuration_to_json,
    forms_dimension,
    multiplicity,
    on_line,
    residual_wrt_line,
    trace_on_line,
)


class StepKind(str, enum.Enum):
    SPECIALIZE = "specialize"
    DIME = "dime_step"
    DESCEND = "residue_descend"
    TERMINAL = "terminal"


class Mode(str, enum.Enum):
    COMBINATORIAL = "combinatorial"
    ORACLE = "oracle_checked"


@dataclass(frozen=True)
class Piece:
    id: str
    component: Component

    @property
    def on_d(self) -> bool:
        return on_line(self.component.placement)


@dataclass(frozen=True)
class HoraceState:
    degree: int
    pieces: tuple = ()
    dime: Piece | None = None

    def all_pieces(self) -> tuple:
        return self.pieces + ((self.dime,) if self.dime else ())

    @property
    def length(self) -> int:
        return sum(component_length(p.component) for p in self.all_pieces())

    def base_trace(self) -> int:
        return sum(trace_on_line(p.component) for p in self.all_pieces() if p.on_d)

    def configuration(self) -> Configuration:
        return Configuration(self.degree, tuple(p.component for p in self.all_pieces()))

    def to_json(self) -> dict:
        return {"degree": self.degree,
                "components": [dict(component_to_json(p.component), id=p.id)
                               for p in self.pieces],
                "dime": None if self.dime is None
                else dict(component_to_json(self.dime.component), id=self.dime.id)}

    @classmethod
    def from_json(cls, doc: dict) -> "HoraceState":
        pieces = tuple(Piece(c["id"], component_from_json(c, c["id"]))
                       for c in doc["components"])
        dime = doc.get("dime")
        return cls(doc["degree"], pieces,
                   None if dime is None else Piece(dime["id"], component_from_json(dime, "dime")))


@dataclass(frozen=True)
class Check:
    name: str
    holds: bool
    blocking: bool = True

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, "blocking": self.blocking}


@dataclass(frozen=True)
class HoraceStep:
    kind: StepKind
    degree: int
    moved: tuple = ()
    fillers: int = 0
    dime_source: str | None = None
    s: int = 0
    x: int = 0
    trace: int = 0
    m_prime: int = 0
    e_prime: int = 0
    length_before: int = 0
    length_after: int | None = None
    checks: tuple = ()
    state: HoraceState | None = None
    oracle: dict | None = None

    @property
    def trace_total(self) -> int:
        """Trace degree on D including the reduced point of a dime step."""
        return self.trace + (1 if self.kind is StepKind.DIME else 0)

    def failed(self) -> Check | None:
        return next((c for c in self.checks if c.blocking and not c.holds), None)

    def to_json(self) -> dict:
        out = {"degree": self.degree, "kind": self.kind.value, "moved": list(self.moved),
               "fillers": self.fillers, "dime_source": self.dime_source, "s": self.s,
               "x": self.x, "trace": self.trace, "m_prime": self.m_prime,
               "e_prime": self.e_prime, "length_before": self.length_before,
               "length_after": self.length_after,
               "checks": [c.to_json() for c in self.checks],
               "state": self.state.to_json() if self.state else None}
        if self.oracle is not None:
            out["oracle"] = self.oracle
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "HoraceStep":
        return cls(kind=StepKind(doc["kind"]), degree=doc["degree"], moved=tuple(doc["moved"]),
                   fillers=doc.get("fillers", 0), dime_source=doc.get("dime_source"),
                   s=doc["s"], x=doc["x"], trace=doc.get("trace", 0),
                   m_prime=doc["m_prime"], e_prime=doc["e_prime"],
                   length_before=doc.get("length_before", 0),
                   length_after=doc.get("length_after"),
                   checks=tuple(Check(c["name"], c["holds"], c.get("blocking", True))
                                for c in doc["checks"]),
                   state=HoraceState.from_json(doc["state"]) if doc.get("state") else None,
                   oracle=doc.get("oracle"))


@dataclass
class HoraceTrace:
    instance: dict
    steps: list = field(default_factory=list)
    terminal: dict = field(default_factory=dict)
    verdict: str = "stuck"
    stuck: dict | None = None

    @property
    def derived(self) -> bool:
        return self.verdict == "derived"

    def to_json(self) -> dict:
        return {"instance": self.instance, "steps": [s.to_json() for s in self.steps],
                "terminal": self.terminal, "verdict": self.verdict, "stuck": self.stuck}

    @classmethod
    def from_json(cls, doc: dict) -> "HoraceTrace":
        return cls(doc["instance"], [HoraceStep.from_json(s) for s in doc["steps"]],
                   doc["terminal"], doc["verdict"], doc.get("stuck"))


def initial_state(z: Configuration) -> HoraceState:
    pieces = []
    for k, c in enumerate(z.components):
        if isinstance(c.placement, Fixed):
            raise SchemeError(f"component {k}: the Horace engine needs generic or online placements")
        pieces.append(Piece(f"c{k}", c))
    return HoraceState(z.degree, tuple(pieces))


def _on_d(c: Component) -> Component:
    return replace(c, placement=ON_LINE)


def _movable(p: Piece) -> bool:
    c = p.component
    return not (isinstance(c, MonomialType) and not c.aligned)


def _is_double(c: Component) -> bool:
    return isinstance(c, FatPoint) and c.mult == 2


def plan_specialization(st: HoraceState) -> HoraceStep:
    """Choose what to move onto D at degree ``st.degree``.

    Largest multiplicity first, ties by id, each one only if the trace stays
    within t'+1. A trace of exactly t' calls for a dime step, which consumes a
    double point kept off D. Fillers cover whatever gap remains.
    """
    t = st.degree
    budget = t + 1
    n_t = forms_dimension(t)
    base = st.base_trace()
    off = sorted((p for p in st.pieces if not p.on_d),
                 key=lambda p: (-multiplicity(p.component), p.id))

    moved, trace = [], base
    for p in off:
        if not _movable(p):
            continue
        tr = trace_on_line(_on_d(p.component))
        if trace + tr <= budget:
            moved.append(p)
            trace += tr
    moved_ids = {p.id for p in moved}
    on_before = sum(1 for p in st.all_pieces() if p.on_d)
    spare = next((p for p in off if p.id not in moved_ids and _is_double(p.component)), None)
    alpha = n_t - st.length

    fillers, kind, source = 0, None, None
    gap = budget - trace
    x_moved = on_before + len(moved)
    if gap == 0:
        kind = StepKind.SPECIALIZE if moved else StepKind.DESCEND
    else:
        # dime step keeps the filler budget intact, so it goes first
        dime_fillers = gap - 1
        if spare is not None and dime_fillers <= alpha and x_moved + dime_fillers >= 2:
            kind, fillers, source = StepKind.DIME, dime_fillers, spare.id
        elif gap <= alpha:
            kind, fillers = StepKind.SPECIALIZE, gap
        elif spare is not None and dime_fillers <= alpha:
            kind, fillers, source = StepKind.DIME, dime_fillers, spare.id
        else:
            kind, fillers = (StepKind.SPECIALIZE if moved else StepKind.DESCEND), 0
    trace += fillers
    x = x_moved + fillers

    rest = [p for p in off if p.id not in moved_ids]
    m_prime = max((multiplicity(p.component) for p in rest), default=0)
    e_prime = sum(1 for p in rest if _is_double(p.component))

    checks = [
        Check("length <= n_t'", st.length <= n_t),
        Check("trace <= t'+1", base <= budget and trace <= budget),
        Check("trace in {t', t'+1}", trace == budget or (trace == t and kind is StepKind.DIME)),
        Check("x >= 2", x >= 2, blocking=kind is StepKind.DIME),
        Check("e' > (t'-2)(m'-1)/2", 2 * e_prime > (t - 2) * (m_prime - 1), blocking=False),
    ]
    if kind is StepKind.DIME:
        checks.append(Check("spare double point off D", source is not None))
    return HoraceStep(kind=kind, degree=t, moved=tuple(p.id for p in moved), fillers=fillers,
                      dime_source=source, s=budget - base, x=x, trace=trace,
                      m_prime=m_prime, e_prime=e_prime, length_before=st.length,
                      checks=tuple(checks), state=st)


def apply_step(st: HoraceState, step: HoraceStep) -> HoraceState:
    """Residual of the specialized scheme with respect to D, in degree t'-1."""
    if step.degree != st.degree:
        raise ValueError(f"step for degree {step.degree} applied to state of degree {st.degree}")
    by_id = {p.id: p for p in st.pieces}
    for pid in step.moved:
        if pid not in by_id or by_id[pid].on_d:
            raise ValueError(f"step moves {pid!r}, which is not an off-D component of the state")
    if step.kind is StepKind.DIME:
        src = by_id.get(step.dime_source)
        if src is None or src.on_d or not _is_double(src.component) or src.id in step.moved:
            raise ValueError(f"dime step needs an off-D double point, got {step.dime_source!r}")
    elif step.dime_source is not None:
        raise ValueError("only a dime step may consume a double point")

    moved = set(step.moved)
    pieces = []
    for p in st.pieces:
        if p.id == step.dime_source:
            continue
        c = _on_d(p.component) if p.id in moved else p.component
        r = residual_wrt_line(c)
        if r is not None:
            pieces.append(Piece(p.id, r))
    dime = Piece(f"dime@{st.degree}", Dime()) if step.kind is StepKind.DIME else None
    return HoraceState(st.degree - 1, tuple(pieces), dime)


def _node_oracle(st: HoraceState, trials: int, seed: int, prime: int) -> dict:
    rep = compute_cohomology(st.configuration(), prime=prime, trials=trials, seed=seed)
    return {"h0": rep.h0, "h1": rep.h1, "verdict": rep.verdict.value}


def run(z: Configuration, base_degree: int = 1, mode: Mode = Mode.COMBINATORIAL,
        seed: int = 0, trials: int = DEFAULT_TRIALS, prime: int = DEFAULT_PRIME) -> HoraceTrace:
    """Descend from degree ``z.degree`` to ``base_degree`` and record every step.

    The terminal scheme A is accepted when it is empty or a reduced point;
    otherwise, in oracle-checked mode, the oracle decides it directly.
    """
    if base_degree < 1:
        raise ValueError("base degree must be at least 1")
    mode = Mode(mode)
    st = initial_state(z)
    tr = HoraceTrace(instance={"configuration": configuration_to_json(z),
                               "base_degree": base_degree, "mode": mode.value,
                               "seed": seed})
    while st.degree > base_degree and st.length > 1:
        step = plan_specialization(st)
        if mode is Mode.ORACLE:
            node = _node_oracle(st, trials, child_seed(seed, "node", len(tr.steps)), prime)
            step = replace(step, oracle=node,
                           checks=step.checks + (Check("oracle h1 = 0", node["h1"] == 0),))
        bad = step.failed()
        if bad is not None:
            tr.steps.append(step)
            tr.stuck = {"step": len(tr.steps) - 1, "check": bad.name}
            break
        nxt = apply_step(st, step)
        tr.steps.append(replace(step, length_after=nxt.length))
        st = nxt

    alpha = forms_dimension(st.degree) - st.length
    terminal = {"state": st.to_json(), "degree": st.degree, "length": st.length,
                "alpha": alpha, "rule": None, "verdict": "stuck"}
    tr.terminal = terminal
    if tr.stuck is not None:
        return tr
    if st.length <= 1:
        terminal.update(rule="empty or reduced point", verdict="derived")
    elif mode is Mode.ORACLE:
        node = _node_oracle(st, trials, child_seed(seed, "terminal"), prime)
        terminal.update(rule="oracle", oracle=node,
                        verdict="derived" if node["h1"] == 0 else "stuck")
    else:
        terminal["rule"] = "none"
    if terminal["verdict"] == "derived":
        tr.verdict = "derived"
    else:
        tr.stuck = {"step": len(tr.steps), "check": "terminal"}
    return tr


def validate_trace(tr: HoraceTrace | dict, trials: int = DEFAULT_TRIALS, seed: int = 0,
                   prime: int = DEFAULT_PRIME) -> list[tuple[str, str, bool]]:
    """Re-check each recorded node against the oracle with fresh randomness.

    A derived trace claims h^1 = 0 at every node. Recorded lengths must match
    the recorded states in any case.
    """
    if isinstance(tr, dict):
        tr = HoraceTrace.from_json(tr)
    nodes = [(f"step{k}", s.state, s.length_before) for k, s in enumerate(tr.steps)]
    term = tr.terminal.get("state")
    if term is not None and tr.terminal.get("length", 0) > 0:
        nodes.append(("terminal", HoraceState.from_json(term), tr.terminal["length"]))
    out = []
    for node_id, st, recorded_length in nodes:
        rep = compute_cohomology(st.configuration(), prime=prime, trials=trials,
                                 seed=child_seed(seed, "validate", node_id))
        agrees = recorded_length == st.length
        if tr.derived:
            agrees = agrees and rep.h1 == 0
        out.append((node_id, rep.verdict.value, agrees))
    return out
