"""Job configuration language.

A config is line oriented.  ``#`` starts a comment.  The job itself is either
one job line

    lefschetz universal k=2 complex=spin lift=+ current=eta1*beta1 kappa=8

or ``key = value`` lines (``job = lefschetz``, ``builder = universal``, ...).
Sections in brackets describe custom rings and bundles:

    [ring]
    vars = y:2:2, x:2:2        # name:degree[:nilpotency]
    cap = 4                    # optional degree cap
    fiber = y                  # optional fiber variables
    integrate = y*x            # optional volume monomial (value 1)

    [normal]                   # one section per angle
    theta = 1/2                # in multiples of pi, strictly between 0 and 1
    roots = x, 0

    [minus1] / [leaf] / [transverse]   roots = ...   (real half-roots)
    [twist] / [ehat]                   roots = ...   weights = ...
    [tangent]                  kind = real|complex, total = <expr>, rank = n

Ring elements use + - * / ^ with the usual precedence; ``/`` divides by a
scalar, ``^`` takes an integer exponent (negative inverts).  Scalars may use
``i`` and ``zetaN`` (a primitive N-th root of unity).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import Cyclotomic

__all__ = ["ConfigError", "JobConfig", "Section", "parse_config", "parse_expression", "parse_angle"]

JOB_KINDS = ("genus", "lefschetz", "rigidity", "verify", "bott-taubes", "integrality")


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None, token: str | None = None):
        self.message = message
        self.line = line
        self.col = col
        self.token = token
        super().__init__(str(self))

    def __str__(self):
        where = ""
        if self.line is not None:
            where = f"line {self.line}"
            if self.col is not None:
                where += f", column {self.col}"
            where = " at " + where
        near = f" (near {self.token!r})" if self.token else ""
        return f"config error{where}: {self.message}{near}"


@dataclass
class Entry:
    value: str
    line: int | None
    col: int | None


@dataclass
class Section:
    name: str
    entries: dict[str, Entry]
    line: int

    def get(self, key: str, default: str | None = None) -> str | None:
        e = self.entries.get(key)
        return default if e is None else e.value

    def where(self, key: str) -> tuple[int, int]:
        e = self.entries.get(key)
        return (e.line, e.col) if e else (self.line, 1)


@dataclass
class JobConfig:
    kind: str
    builder: str
    params: dict[str, Entry] = field(default_factory=dict)
    sections: list[Section] = field(default_factory=list)

    def get(self, key: str, default: str | None = None) -> str | None:
        e = self.params.get(key)
        return default if e is None else e.value

    def where(self, key: str) -> tuple[int | None, int | None]:
        e = self.params.get(key)
        return (e.line, e.col) if e else (None, None)

    def error(self, key: str, message: str) -> ConfigError:
        line, col = self.where(key)
        return ConfigError(message, line, col, self.get(key))

    def section(self, name: str) -> Section | None:
        found = [s for s in self.sections if s.name == name]
        if len(found) > 1:
            raise ConfigError(f"section [{name}] given more than once", found[1].line, 1)
        return found[0] if found else None

    def all_sections(self, name: str) -> list[Section]:
        return [s for s in self.sections if s.name == name]

    def normalized(self) -> dict:
        return {
            "kind": self.kind,
            "builder": self.builder,
            "params": {k: v.value for k, v in sorted(self.params.items())},
            "sections": [{"name": s.name, **{k: v.value for k, v in sorted(s.entries.items())}} for s in self.sections],
        }


_KEY = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")


def _strip_comment(raw: str) -> str:
    i = raw.find("#")
    return raw if i < 0 else raw[:i]


def parse_config(text: str, overrides: list[str] | None = None) -> JobConfig:
    """Parse a config text (plus optional command-line ``key=value`` words)."""
    kind = builder = None
    params: dict[str, Entry] = {}
    sections: list[Section] = []
    current: Section | None = None

    def put(target: dict, key: str, value: str, line: int, col: int):
        if not _KEY.fullmatch(key):
            raise ConfigError("malformed key", line, col, key)
        if key in target:
            raise ConfigError(f"duplicate key {key!r}", line, col, key)
        target[key] = Entry(value.strip(), line, col)

    def job_words(words: list[tuple[str, int]], line: int):
        nonlocal kind, builder
        for w, col in words:
            if "=" in w:
                key, _, value = w.partition("=")
                if current is not None:
                    raise ConfigError("job parameters must come before sections", line, col, w)
                put(params, key, value, line, col + len(key) + 1)
            elif kind is None:
                kind = w
                kind_pos[0] = (line, col)
            elif builder is None:
                builder = w
            else:
                raise ConfigError("unexpected word", line, col, w)

    kind_pos = [(None, None)]
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        if not body.strip():
            continue
        stripped = body.strip()
        col0 = len(body) - len(body.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError("unterminated section header", lineno, col0, stripped)
            name = stripped[1:-1].strip()
            if not _KEY.fullmatch(name):
                raise ConfigError("malformed section name", lineno, col0 + 1, name)
            current = Section(name, {}, lineno)
            sections.append(current)
            continue
        m = re.match(r"\s*([^=\s]+)\s*=\s*(.*)$", body)
        if m and " " not in stripped.split("=", 1)[0].strip():
            key, value = m.group(1), m.group(2)
            col = m.start(2) + 1
            if value.strip() == "":
                raise ConfigError(f"missing value for {key!r}", lineno, m.start(2) + 1, key)
            if current is None:
                if key == "job":
                    kind = value.strip()
                    kind_pos[0] = (lineno, m.start(2) + 1)
                elif key == "builder":
                    builder = value.strip()
                else:
                    put(params, key, value, lineno, col)
            else:
                put(current.entries, key, value, lineno, col)
            continue
        if current is not None:
            raise ConfigError("expected key = value inside a section", lineno, col0, stripped)
        words = [(mm.group(0), mm.start() + 1) for mm in re.finditer(r"\S+", body)]
        job_words(words, lineno)

    for word in overrides or []:
        key, eq, value = word.partition("=")
        if not eq:
            if kind is None:
                kind = word
            elif builder is None:
                builder = word
            else:
                raise ConfigError("unexpected command-line word", token=word)
            continue
        params[key] = Entry(value, None, None)  # command-line words have no position

    if kind is None:
        raise ConfigError("no job kind given")
    kind = kind.lower().replace("_", "-")
    if kind not in JOB_KINDS:
        line, col = kind_pos[0]
        raise ConfigError(f"unknown job kind; expected one of {', '.join(JOB_KINDS)}", line, col, kind)
    if builder is None:
        raise ConfigError(f"{kind} job needs a builder or identity name")
    return JobConfig(kind, builder, params, sections)


# ---------------------------------------------------------------------------
# values
# ---------------------------------------------------------------------------

def parse_rational_value(text: str, line=None, col=None) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError("malformed rational", line, col, text) from None


def parse_int(text: str, line=None, col=None) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError("expected an integer", line, col, text) from None


_ANGLE = re.compile(r"^\s*(?P<num>[+-]?\d+)?\s*\*?\s*(?P<pi>pi|π)?\s*(?:/\s*(?P<den>\d+))?\s*$")


def parse_angle(text: str, line=None, col=None) -> Fraction:
    """theta given in multiples of pi (``1/2``, ``pi/2``, ``2pi/3``); returns turns."""
    m = _ANGLE.match(text)
    if not m or (m.group("num") is None and m.group("pi") is None):
        raise ConfigError("malformed angle", line, col, text)
    num = int(m.group("num")) if m.group("num") is not None else 1
    den = int(m.group("den")) if m.group("den") is not None else 1
    if den == 0:
        raise ConfigError("malformed angle", line, col, text)
    multiple = Fraction(num, den)
    if not 0 < multiple < 1:
        raise ConfigError("θ must lie in (0,π)", line, col, text)
    return multiple / 2


# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str, line, col0):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = text[pos:].strip()[:1]
            raise ConfigError("unexpected character in expression", line, col0 + pos, bad)
        kind = m.lastgroup
        out.append((kind, m.group(kind), col0 + m.start(kind)))
        pos = m.end()
    out.append(("end", "", col0 + len(text)))
    return out


def parse_expression(text: str, names: dict, line: int | None = None, col: int = 1):
    """Evaluate an expression over ``names`` (identifier -> value)."""
    tokens = _tokenize(text, line, col)
    pos = [0]

    def peek():
        return tokens[pos[0]]

    def take():
        t = tokens[pos[0]]
        pos[0] += 1
        return t

    def fail(msg, tok):
        raise ConfigError(msg, line, tok[2], tok[1] or "end of expression")

    def expr():
        v = term()
        while peek()[1] in ("+", "-") and peek()[0] == "op":
            op = take()[1]
            r = term()
            v = v + r if op == "+" else v - r
        return v

    def term():
        v = unary()
        while peek()[0] == "op" and peek()[1] in ("*", "/"):
            op = take()
            r = unary()
            if op[1] == "*":
                v = v * r
            else:
                r = _as_scalar(r)
                if r is None:
                    fail("can only divide by a scalar", op)
                if not r:
                    fail("division by zero", op)
                v = v / r
        return v

    def unary():
        if peek()[0] == "op" and peek()[1] in ("-", "+"):
            op = take()[1]
            v = unary()
            return -v if op == "-" else v
        return power()

    def power():
        base = atom()
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            sign = 1
            if peek()[0] == "op" and peek()[1] == "-":
                take()
                sign = -1
            tok = take()
            if tok[0] != "num":
                fail("exponent must be an integer", tok)
            k = sign * int(tok[1])
            try:
                return base ** k
            except ZeroDivisionError:
                fail("cannot invert this value", tok)
        return base

    def atom():
        tok = take()
        if tok[0] == "num":
            return Fraction(int(tok[1]))
        if tok[0] == "id":
            name = tok[1]
            if name in names:
                return names[name]
            if name == "i":
                return Cyclotomic.zeta(4)
            m = re.fullmatch(r"zeta(\d+)", name)
            if m and int(m.group(1)) > 0:
                return Cyclotomic.zeta(int(m.group(1)))
            fail("unknown name", tok)
        if tok[1] == "(":
            v = expr()
            close = take()
            if close[1] != ")":
                fail("expected ')'", close)
            return v
        fail("unexpected token", tok)

    value = expr()
    if peek()[0] != "end":
        fail("unexpected token", peek())
    return value


def _as_scalar(v):
    from .gring import RingElement
    if isinstance(v, RingElement):
        if set(v.terms) - {v.ring.unit_monomial()}:
            return None
        return v.constant_term()
    return v


def split_list(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]
