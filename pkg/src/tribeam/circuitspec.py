"""Textual description of the three-beam interferometer.

The format is line oriented: one statement per line, ``#`` starts a comment,
LF or CRLF line endings. See ``docs/grammar.md`` for the EBNF. Example::

    source w=1.0 rate=1.0
    splitter BS1 ratio=0.5
    splitter BS2 ratio=0.5
    detector alice placement=DA2
    detector bob arm=h

The first splitter feeds the upper (Alice) branch with fraction ``ratio`` and
leaves the rest to arm h; the second splits Alice's branch into arms a and b.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Union

PRESETS = ("paper-fig1",)
PLACEMENTS = ("DA1", "DA2")
ARMS = ("a", "b", "h")
DEFAULT_FOLD_ANGLE = 60.0
FOLD_ANGLE_RANGE = (45.0, 90.0)  # open interval; w' = w sec(90 - fold) degenerates at 90

_NUMBER = re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?", re.ASCII)
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*", re.ASCII)
_KEY = re.compile(r"[A-Za-z_][A-Za-z0-9_]*", re.ASCII)
_TOKEN = re.compile(r"[^ \t\f\v\r]+")


class ParseError(ValueError):
    """Syntax or range error at a 1-based (line, column) position."""

    def __init__(self, line: int, column: int, message: str, token: str = ""):
        self.line = line
        self.column = column
        self.message = message
        self.token = token
        super().__init__(f"line {line}, column {column}: {message}" + (f" (at {token!r})" if token else ""))


@dataclass(frozen=True)
class Source:
    w: float = 1.0
    rate: float = 1.0


@dataclass(frozen=True)
class Splitter:
    id: str
    ratio: float = 0.5


@dataclass(frozen=True)
class Mirror:
    id: str
    angle: float


@dataclass(frozen=True)
class PathCompensator:
    """Residual a-b path difference in wavelengths; integers mean in phase."""

    leg: str
    compensation: float = 0.0


@dataclass(frozen=True)
class PhaseShifter:
    leg: str
    phi: float = 0.0


Element = Union[Splitter, Mirror, PathCompensator, PhaseShifter]


@dataclass(frozen=True)
class Detectors:
    alice_placement: str = "DA2"
    bob_arm: str = "h"


@dataclass(frozen=True)
class CircuitSpec:
    source: Source = field(default_factory=Source)
    elements: tuple = ()
    detectors: Detectors = field(default_factory=Detectors)
    fold_angle: float = DEFAULT_FOLD_ANGLE

    @property
    def splitters(self) -> tuple[Splitter, ...]:
        return tuple(e for e in self.elements if isinstance(e, Splitter))

    @property
    def mirrors(self) -> tuple[Mirror, ...]:
        return tuple(e for e in self.elements if isinstance(e, Mirror))

    @property
    def compensators(self) -> tuple[PathCompensator, ...]:
        return tuple(e for e in self.elements if isinstance(e, PathCompensator))

    @property
    def phase_shifters(self) -> tuple[PhaseShifter, ...]:
        return tuple(e for e in self.elements if isinstance(e, PhaseShifter))

    @property
    def relative_phase(self) -> float:
        """Net extra phase of leg a relative to leg b, in radians."""
        phi = 0.0
        for ps in self.phase_shifters:
            if ps.leg == "a":
                phi += ps.phi
            elif ps.leg == "b":
                phi -= ps.phi
        return phi

    @property
    def path_difference(self) -> float:
        """Residual a-b path difference in wavelengths after compensation."""
        return sum(c.compensation if c.leg == "a" else -c.compensation for c in self.compensators)

    def with_placement(self, placement: str) -> "CircuitSpec":
        return replace(self, detectors=replace(self.detectors, alice_placement=placement))


def paper_preset(placement: str = "DA2") -> CircuitSpec:
    """Reference arrangement: two 50/50 splitters, 45/60 degree folds, PLC on b."""
    return CircuitSpec(
        source=Source(w=1.0, rate=1.0),
        elements=(
            Splitter("BS1", 0.5),
            Splitter("BS2", 0.5),
            Mirror("M0", 45.0),
            Mirror("MA45", 45.0),
            Mirror("MA60", 60.0),
            Mirror("MB45", -45.0),
            Mirror("MB60", -60.0),
            PathCompensator("b", 0.0),
        ),
        detectors=Detectors(alice_placement=placement, bob_arm="h"),
        fold_angle=DEFAULT_FOLD_ANGLE,
    )


# statement -> (allowed keys, required keys, takes IDENT argument)
_GRAMMAR = {
    "source": ({"w", "rate"}, {"w", "rate"}, False),
    "splitter": ({"ratio"}, set(), True),
    "mirror": ({"angle"}, {"angle"}, True),
    "plc": ({"compensation"}, set(), True),
    "phase": ({"phi"}, set(), True),
    "detector": ({"placement", "arm"}, set(), True),
    "preset": (set(), set(), True),
    "geometry": ({"fold_angle"}, {"fold_angle"}, False),
}
_STRING_KEYS = {"placement", "arm"}


@dataclass
class _Tok:
    text: str
    line: int
    col: int

    def error(self, message: str, offset: int = 0, token: str | None = None) -> ParseError:
        return ParseError(self.line, self.col + offset, message, self.text if token is None else token)


def _number(tok: _Tok, raw: str, offset: int) -> float:
    if not raw or _NUMBER.fullmatch(raw) is None:
        raise tok.error(f"expected a decimal number, got {raw!r}", offset, raw)
    val = float(raw)
    if not math.isfinite(val):
        raise tok.error(f"number {raw!r} is out of range", offset, raw)
    return val


def _split_kv(tok: _Tok, allowed: set[str]) -> tuple[str, str, int]:
    key, eq, raw = tok.text.partition("=")
    if not eq:
        raise tok.error("expected key=value")
    if _KEY.fullmatch(key) is None:
        raise tok.error(f"malformed key {key!r}", 0, key or tok.text)
    if key not in allowed:
        raise tok.error(f"unknown key {key!r}", 0, key)
    return key, raw, len(key) + 1


def _lines(text: str):
    for lineno, line in enumerate(text.split("\n"), start=1):
        if line.endswith("\r"):
            line = line[:-1]
        line = line.split("#", 1)[0]
        toks = [_Tok(m.group(), lineno, m.start() + 1) for m in _TOKEN.finditer(line)]
        if toks:
            yield lineno, toks


def _decode(data) -> str:
    if isinstance(data, str):
        return data
    data = bytes(data)
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        head = data[: exc.start]
        line = head.count(b"\n") + 1
        col = exc.start - (head.rfind(b"\n") + 1) + 1
        raise ParseError(line, col, "input is not valid UTF-8") from None


def parse(text) -> CircuitSpec:
    """Parse a circuit document (``str`` or UTF-8 ``bytes``).

    Raises ``ParseError`` at the first violation. Omitted optional fields take
    defaults: splitter ratio 0.5, phase 0, compensation 0, fold angle 60.
    """
    text = _decode(text)
    source: Source | None = None
    elements: dict[tuple[str, str], Element] = {}
    alice: str | None = None
    bob = "h"
    fold_angle = DEFAULT_FOLD_ANGLE
    seen: set[tuple[str, str]] = set()
    first_statement = True
    last_line = 1

    for lineno, toks in _lines(text):
        last_line = lineno
        head, args = toks[0], toks[1:]
        if head.text not in _GRAMMAR:
            raise head.error(f"unknown statement {head.text!r}")
        allowed, required, takes_ident = _GRAMMAR[head.text]
        ident = None
        if takes_ident:
            if not args:
                raise head.error(f"{head.text} requires a name")
            ident_tok, args = args[0], args[1:]
            if "=" in ident_tok.text or _IDENT.fullmatch(ident_tok.text) is None:
                raise ident_tok.error(f"expected a name after {head.text!r}")
            ident = ident_tok.text

        kvs: dict[str, str | float] = {}
        for tok in args:
            key, raw, off = _split_kv(tok, allowed)
            if key in kvs:
                raise tok.error(f"duplicate key {key!r}", 0, key)
            if key in _STRING_KEYS:
                if _IDENT.fullmatch(raw) is None:
                    raise tok.error(f"expected a name for {key!r}", off, raw)
                kvs[key] = raw
            else:
                kvs[key] = _number(tok, raw, off)
        missing = required - set(kvs)
        if missing:
            raise head.error(f"{head.text} is missing {', '.join(sorted(missing))}")

        def value_error(key: str, message: str) -> ParseError:
            tok = next(t for t in args if t.text.startswith(key + "="))
            raw = tok.text[len(key) + 1:]
            return tok.error(message, len(key) + 1, raw)

        kind = head.text
        if kind == "preset":
            if not first_statement:
                raise head.error("preset must be the first statement")
            if ident not in PRESETS:
                raise ident_tok.error(f"unknown preset {ident!r}")
            base = paper_preset()
            source = base.source
            for e in base.elements:
                elements[(type(e).__name__, getattr(e, "id", None) or e.leg)] = e
            alice, bob, fold_angle = base.detectors.alice_placement, base.detectors.bob_arm, base.fold_angle
        elif kind == "source":
            if ("source", "") in seen:
                raise head.error("duplicate source statement")
            if kvs["w"] <= 0:
                raise value_error("w", "beam width must be positive")
            if kvs["rate"] <= 0:
                raise value_error("rate", "source rate must be positive")
            source = Source(w=kvs["w"], rate=kvs["rate"])
        elif kind == "geometry":
            if ("geometry", "") in seen:
                raise head.error("duplicate geometry statement")
            fold_angle = kvs["fold_angle"]
        elif kind == "splitter":
            ratio = kvs.get("ratio", 0.5)
            if not 0.0 < ratio < 1.0:
                raise value_error("ratio", "splitter ratio must lie in (0, 1)")
            elements[("Splitter", ident)] = Splitter(ident, ratio)
        elif kind == "mirror":
            elements[("Mirror", ident)] = Mirror(ident, kvs["angle"])
        elif kind in ("plc", "phase"):
            if ident not in ARMS:
                raise ident_tok.error(f"unknown leg {ident!r}; expected one of {', '.join(ARMS)}")
            if kind == "plc":
                elements[("PathCompensator", ident)] = PathCompensator(ident, kvs.get("compensation", 0.0))
            else:
                elements[("PhaseShifter", ident)] = PhaseShifter(ident, kvs.get("phi", 0.0))
        elif kind == "detector":
            if ident == "alice":
                if set(kvs) != {"placement"}:
                    raise head.error("detector alice takes exactly placement=DA1|DA2")
                if ("detector", "alice") in seen:
                    raise ident_tok.error("more than one alice placement")
                if kvs["placement"] not in PLACEMENTS:
                    raise value_error("placement", "placement must be DA1 or DA2")
                alice = kvs["placement"]
            elif ident == "bob":
                if set(kvs) != {"arm"}:
                    raise head.error("detector bob takes exactly arm=a|b|h")
                if ("detector", "bob") in seen:
                    raise ident_tok.error("more than one bob detector")
                if kvs["arm"] not in ARMS:
                    raise value_error("arm", "arm must be one of a, b, h")
                bob = kvs["arm"]
            else:
                raise ident_tok.error(f"unknown detector {ident!r}; expected alice or bob")
        seen.add((kind, ident or ""))
        first_statement = False

    if source is None:
        raise ParseError(last_line, 1, "missing source statement")
    if alice is None:
        raise ParseError(last_line, 1, "missing detector alice statement")
    return CircuitSpec(
        source=source,
        elements=tuple(elements.values()),
        detectors=Detectors(alice_placement=alice, bob_arm=bob),
        fold_angle=fold_angle,
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def serialize(spec: CircuitSpec) -> str:
    """Render ``spec`` as a document that parses back to an equal spec."""
    out = [f"source w={_fmt(spec.source.w)} rate={_fmt(spec.source.rate)}"]
    if spec.fold_angle != DEFAULT_FOLD_ANGLE:
        out.append(f"geometry fold_angle={_fmt(spec.fold_angle)}")
    for e in spec.elements:
        if isinstance(e, Splitter):
            out.append(f"splitter {e.id} ratio={_fmt(e.ratio)}")
        elif isinstance(e, Mirror):
            out.append(f"mirror {e.id} angle={_fmt(e.angle)}")
        elif isinstance(e, PathCompensator):
            out.append(f"plc {e.leg} compensation={_fmt(e.compensation)}")
        elif isinstance(e, PhaseShifter):
            out.append(f"phase {e.leg} phi={_fmt(e.phi)}")
        else:
            raise TypeError(f"unknown element {e!r}")
    out.append(f"detector alice placement={spec.detectors.alice_placement}")
    out.append(f"detector bob arm={spec.detectors.bob_arm}")
    return "\n".join(out) + "\n"


def validate(spec: CircuitSpec) -> list[str]:
    """Physical-setup violations of a parsed spec; empty means usable."""
    problems = []
    splitters = spec.splitters
    if not splitters:
        problems.append("no splitter: arm h and Alice's branch are never separated")
    if len(splitters) > 2:
        problems.append(f"{len(splitters)} splitters; at most two are supported")
    for s in splitters:
        if not 0.0 < s.ratio < 1.0:
            problems.append(f"splitter {s.id}: ratio {s.ratio} is not a unitary 2x2 split")
    ids = [e.id for e in spec.elements if isinstance(e, (Splitter, Mirror))]
    for dup in sorted({x for x in ids if ids.count(x) > 1}):
        problems.append(f"duplicate element id {dup!r}")

    lo, hi = FOLD_ANGLE_RANGE
    if not lo < spec.fold_angle < hi:
        problems.append(
            f"fold_angle {spec.fold_angle} outside ({lo:g}, {hi:g}): region-k width w' = w sec(90 - fold) degenerates"
        )
    for m in spec.mirrors:
        if not 0.0 < abs(m.angle) < 90.0:
            problems.append(f"mirror {m.id}: angle {m.angle} does not fold the beam")

    has_b = len(splitters) >= 2
    placement = spec.detectors.alice_placement
    if placement not in PLACEMENTS:
        problems.append(f"unknown alice placement {placement!r}")
    if placement == "DA2" and not has_b:
        problems.append("DA2 needs both legs a and b, but there is no second splitter")
    for el in spec.compensators + spec.phase_shifters:
        name = "plc" if isinstance(el, PathCompensator) else "phase shifter"
        if el.leg not in ("a", "b"):
            problems.append(f"{name} on leg {el.leg!r}: only legs a and b are supported")
        elif el.leg == "b" and not has_b:
            problems.append(f"{name} on leg b, which does not exist without a second splitter")

    arm = spec.detectors.bob_arm
    if arm not in ARMS:
        problems.append(f"unknown bob arm {arm!r}")
    elif arm != "h":
        if placement == "DA2":
            problems.append(f"bob arm={arm}: arm {arm} is consumed by the interference region k")
        else:
            problems.append(f"bob arm={arm}: arm {arm} is already observed by Alice")
    return problems
