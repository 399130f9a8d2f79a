"""System files, pair files and the line-oriented report format.

A system file is a list of ``key: value`` sections::

    # Bessel-type system
    field:
    algebra: x: derivation, y: forward_difference
    n: 2
    u: x^2
    U: 0, x^2;
       y^2 - x^2, -x
    v: x^2
    V: ...
    e: 1, 0
    lifts: 1, Dx

Matrix rows are separated by ``;`` and entries by ``,``.  Indented lines
continue the previous section; ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import FieldSpec, to_expr
from .ore import OreSpec
from .parsing import ExpressionError, parse_operator, parse_rational
from .system import DFiniteSystem, InvalidSystem, validate

SECTIONS = ("field", "algebra", "n", "u", "U", "v", "V", "e", "lifts")
REQUIRED = ("algebra", "u", "U", "v", "V", "e")


class FileFormatError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1, path: str | None = None):
        self.line = line
        self.column = column
        self.path = path
        where = f"{path}:" if path else "line "
        super().__init__(f"{where}{line}:{column}: {message}")


@dataclass
class _Section:
    key: str
    pieces: list  # (line, column, text)

    @property
    def text(self) -> str:
        return " ".join(t for _, _, t in self.pieces)

    @property
    def line(self) -> int:
        return self.pieces[0][0]

    def locate(self, offset: int) -> tuple[int, int]:
        """Map an offset in ``text`` back to (line, column)."""
        pos = 0
        for line, col, t in self.pieces:
            if offset <= pos + len(t):
                return line, col + (offset - pos)
            pos += len(t) + 1
        line, col, t = self.pieces[-1]
        return line, col + len(t)


def _strip_comment(raw: str) -> str:
    i = raw.find("#")
    return raw if i < 0 else raw[:i]


def read_sections(text: str, allowed=SECTIONS, path: str | None = None) -> dict[str, _Section]:
    sections: dict[str, _Section] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw).rstrip()
        if not body.strip():
            continue
        if body[0] in " \t":
            if current is None:
                raise FileFormatError("continuation line without a section", lineno, 1, path)
            col = len(body) - len(body.lstrip()) + 1
            current.pieces.append((lineno, col, body.strip()))
            continue
        key, sep, value = body.partition(":")
        key = key.strip()
        if not sep:
            raise FileFormatError("expected 'key: value'", lineno, len(body) + 1, path)
        if key not in allowed:
            raise FileFormatError(f"unknown section {key!r}", lineno, 1, path)
        if key in sections:
            raise FileFormatError(f"duplicate section {key!r}", lineno, 1, path)
        col = len(key) + 2 + (len(value) - len(value.lstrip()))
        current = _Section(key, [(lineno, col, value.strip())])
        sections[key] = current
    return sections


def _split(section: _Section, sep: str):
    """Split section text on ``sep``, keeping offsets."""
    text = section.text
    parts = []
    start = 0
    for i, ch in enumerate(text + sep):
        if ch == sep:
            parts.append((start, text[start:i]))
            start = i + 1
    return parts


def _parse_expr(section: _Section, offset: int, chunk: str, parse, path):
    lead = len(chunk) - len(chunk.lstrip())
    try:
        return parse(chunk.strip())
    except ExpressionError as exc:
        line, col = section.locate(offset + lead + exc.pos)
        raise FileFormatError(str(exc).rsplit(" at column", 1)[0], line, col, path) from None


def _parse_algebra(section: _Section, fieldspec: FieldSpec, path) -> OreSpec:
    kinds = {}
    for offset, chunk in _split(section, ","):
        name, sep, kind = chunk.partition(":")
        name = name.strip()
        if not sep or name not in ("x", "y") or name in kinds:
            line, col = section.locate(offset)
            raise FileFormatError("expected 'x: kind, y: kind'", line, col, path)
        kinds[name] = kind.strip()
    if set(kinds) != {"x", "y"}:
        raise FileFormatError("algebra must give kinds for x and y", section.line, 1, path)
    try:
        return OreSpec(fieldspec, kinds["x"], kinds["y"])
    except ValueError as exc:
        raise FileFormatError(str(exc), section.line, 1, path) from None


def parse_system_text(text: str, path: str | None = None, check: bool = True) -> DFiniteSystem:
    sections = read_sections(text, path=path)
    last = len(text.splitlines()) + 1
    for key in REQUIRED:
        if key not in sections:
            raise FileFormatError(f"missing section {key!r}", last, 1, path)
    params = ()
    if "field" in sections:
        params = tuple(p.strip() for _, p in _split(sections["field"], ",") if p.strip())
    try:
        fieldspec = FieldSpec(params)
    except ValueError as exc:
        raise FileFormatError(str(exc), sections["field"].line, 1, path) from None
    spec = _parse_algebra(sections["algebra"], fieldspec, path)
    rat = lambda s: parse_rational(s, fieldspec)

    def scalar(key):
        sec = sections[key]
        return _parse_expr(sec, 0, sec.text, rat, path)

    def vector(key, parse=rat):
        sec = sections[key]
        return [_parse_expr(sec, off, chunk, parse, path) for off, chunk in _split(sec, ",")]

    def matrix(key):
        sec = sections[key]
        rows = []
        for roff, rtext in _split(sec, ";"):
            if not rtext.strip() and rows:
                continue
            row, start = [], 0
            for i, ch in enumerate(rtext + ","):
                if ch == ",":
                    row.append(_parse_expr(sec, roff + start, rtext[start:i], rat, path))
                    start = i + 1
            rows.append(row)
        return rows

    u, v = scalar("u"), scalar("v")
    U, V, e = matrix("U"), matrix("V"), vector("e")
    if "n" in sections:
        try:
            n = int(sections["n"].text)
        except ValueError:
            raise FileFormatError("n must be an integer", sections["n"].line, 1, path) from None
        if n != len(e):
            raise FileFormatError(f"n = {n} but e has {len(e)} entries", sections["e"].line, 1, path)
    lifts = None
    if "lifts" in sections:
        lifts = vector("lifts", lambda s: parse_operator(s, spec))
    sys = DFiniteSystem(spec, u, U, v, V, e, lifts)
    if check:
        validate(sys).raise_if_failed()
    return sys


def parse_system_file(path: str, check: bool = True) -> DFiniteSystem:
    """Read and validate a system file."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_system_text(text, path=path, check=check)


def format_system(sys: DFiniteSystem) -> str:
    spec = sys.spec
    lines = [
        "field: " + ", ".join(spec.fieldspec.parameters),
        f"algebra: x: {spec.x_kind}, y: {spec.y_kind}",
        f"n: {sys.n}",
        f"u: {to_expr(sys.u)}",
        "U: " + "; ".join(", ".join(to_expr(c) for c in row) for row in sys.U),
        f"v: {to_expr(sys.v)}",
        "V: " + "; ".join(", ".join(to_expr(c) for c in row) for row in sys.V),
        "e: " + ", ".join(to_expr(c) for c in sys.e),
    ]
    if sys.lifts is not None:
        lines.append("lifts: " + ", ".join(op.to_expr() for op in sys.lifts))
    return "\n".join(lines) + "\n"


# -- pair files --------------------------------------------------------------

def parse_pair_text(text: str, sys: DFiniteSystem, path: str | None = None):
    """Read ``telescoper:`` and ``certificate:`` from a structured report."""
    from .telescoper import TelescopePair

    sections = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw).strip()
        if not body:
            continue
        key, sep, value = body.partition(":")
        if not sep:
            raise FileFormatError("expected 'key: value'", lineno, 1, path)
        sections[key.strip()] = (lineno, value.strip())
    for key in ("telescoper", "certificate"):
        if key not in sections:
            raise FileFormatError(f"missing {key!r}", len(text.splitlines()) + 1, 1, path)
    spec = sys.spec

    def parse(lineno, s, fn):
        try:
            return fn(s)
        except ExpressionError as exc:
            raise FileFormatError(str(exc), lineno, exc.column, path) from None

    line, value = sections["telescoper"]
    T = parse(line, value, lambda s: parse_operator(s, spec))
    if any(j for _, j in T.terms):
        raise FileFormatError("telescoper must not involve Dy", line, 1, path)
    line, value = sections["certificate"]
    c = tuple(parse(line, s.strip(), lambda t: parse_rational(t, spec.fieldspec)) for s in value.split(","))
    if len(c) != sys.n:
        raise FileFormatError(f"certificate needs {sys.n} entries", line, 1, path)
    return TelescopePair(T, c)


def parse_pair_file(path: str, sys: DFiniteSystem):
    with open(path, encoding="utf-8") as fh:
        return parse_pair_text(fh.read(), sys, path)


def format_report(items, structured: bool) -> str:
    """Render (key, value) pairs; structured output is ``key: value`` per line."""
    lines = []
    for key, value in items:
        if structured:
            lines.append(f"{key}: {value}")
        else:
            lines.append(f"{key.replace('_', ' ')}: {value}")
    return "\n".join(lines) + "\n"


__all__ = [
    "FileFormatError",
    "InvalidSystem",
    "format_report",
    "format_system",
    "parse_pair_file",
    "parse_pair_text",
    "parse_system_file",
    "parse_system_text",
]
