"""Line-oriented text format for relations, operators and subspaces.

    hilbert n=2
    relation A
      vec (1,0 | 0,0)
    operator B
      row 0 1
      row 0 0
    subspace S
      vec (1,0)

'#' starts a comment.  Numbers are complex literals "a", "bi", "a+bi" or
"a-bi"; saving writes 17 significant digits, which round-trips doubles.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .. import relation as rel
from ..relation import Relation
from ..subspace import span

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(
    rf"^(?:(?P<re>[+-]?{_NUM})(?:(?P<isign>[+-])(?P<im>{_NUM})?i)?"
    rf"|(?P<onlyim>[+-]?(?:{_NUM})?)i)$"
)
NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
RESERVED = {"print"}


class FormatError(ValueError):
    """Malformed definitions file."""

    def __init__(self, message: str, line: int | None = None, source: str = "<defs>"):
        self.message, self.line, self.source = message, line, source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


@dataclass
class Environment:
    hilbert_dim: int
    bindings: dict = field(default_factory=dict)

    def bind(self, name: str, value) -> None:
        dim = value.n if isinstance(value, Relation) else value.ambient_dim
        if dim != self.hilbert_dim:
            raise ValueError(f"{name} lives in C^{dim}, expected C^{self.hilbert_dim}")
        self.bindings[name] = value


def parse_complex(text: str) -> complex:
    """Parse "a", "bi", "a+bi" or "a-bi" (b may be omitted); raises ValueError otherwise."""
    m = _COMPLEX.match(text.strip())
    if not m:
        raise ValueError(f"malformed number {text.strip()!r}")
    b = m.group("onlyim")
    if b is not None:
        z = complex(0.0, float(b + "1") if b in ("", "+", "-") else float(b))
    else:
        z = complex(float(m.group("re")), 0.0)
        if m.group("isign"):
            im = float(m.group("im")) if m.group("im") else 1.0
            z += 1j * (im if m.group("isign") == "+" else -im)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"number out of range {text.strip()!r}")
    return z


def format_complex(z: complex, fmt: str = "%.17g") -> str:
    z = complex(z)
    a, b = z.real + 0.0, z.imag + 0.0  # drop negative zeros
    if b == 0:
        return fmt % a
    bs = fmt % abs(b)
    if a == 0:
        return ("-" if b < 0 else "") + bs + "i"
    return f"{fmt % a}{'-' if b < 0 else '+'}{bs}i"


def _numbers(text: str, sep: str, lineno: int, source: str) -> list[complex]:
    parts = [p for p in re.split(sep, text.strip()) if p != ""] if text.strip() else []
    out = []
    for p in parts:
        try:
            out.append(parse_complex(p))
        except ValueError as exc:
            raise FormatError(str(exc), lineno, source) from None
    return out


def loads(text: str, source: str = "<defs>") -> Environment:
    env: Environment | None = None
    block = None  # (kind, name, rows, header line)

    def close():
        if block is None:
            return
        kind, name, rows, line = block
        n = env.hilbert_dim
        if kind == "operator":
            if len(rows) != n:
                raise FormatError(f"inconsistent n: operator {name} has {len(rows)} rows, "
                                  f"expected {n}", line, source)
            value = rel.from_operator(np.array(rows, dtype=complex))
        elif kind == "relation":
            value = rel.from_graph([np.array(r, dtype=complex) for r in rows], n)
        else:
            value = span([np.array(r, dtype=complex) for r in rows], m=n)
        env.bind(name, value)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "hilbert":
            if env is not None:
                raise FormatError("duplicate hilbert line", lineno, source)
            m = re.fullmatch(r"n\s*=\s*(\d+)", rest)
            if not m or int(m.group(1)) < 1:
                raise FormatError("expected 'hilbert n=<positive int>'", lineno, source)
            env = Environment(int(m.group(1)))
            continue
        if env is None:
            raise FormatError("the first definition must be 'hilbert n=<int>'", lineno, source)
        n = env.hilbert_dim
        if head in ("relation", "operator", "subspace"):
            close()
            if not NAME.match(rest) or rest in RESERVED:
                raise FormatError(f"invalid name {rest!r}", lineno, source)
            if rest in env.bindings or (block is not None and block[1] == rest):
                raise FormatError(f"duplicate name {rest!r}", lineno, source)
            block = (head, rest, [], lineno)
            continue
        if block is None:
            raise FormatError(f"{head!r} outside a definition block", lineno, source)
        kind, name, rows, _ = block
        if head == "row" and kind == "operator":
            row = _numbers(rest, r"[\s,]+", lineno, source)
            if len(row) != n:
                raise FormatError(f"inconsistent n: row has {len(row)} entries, expected {n}",
                                  lineno, source)
            rows.append(row)
        elif line.startswith("vec") and kind in ("relation", "subspace"):
            m = re.fullmatch(r"vec\s*\((.*)\)", line)
            if not m:
                raise FormatError("expected 'vec (...)'", lineno, source)
            body = m.group(1)
            if kind == "relation":
                halves = body.split("|")
                if len(halves) != 2:
                    raise FormatError("relation vectors need the form (f | f')", lineno, source)
                f = _numbers(halves[0], r",", lineno, source)
                g = _numbers(halves[1], r",", lineno, source)
                if len(f) != n or len(g) != n:
                    raise FormatError(f"inconsistent n: expected {n} entries on each side",
                                      lineno, source)
                rows.append(f + g)
            else:
                v = _numbers(body, r",", lineno, source)
                if len(v) != n:
                    raise FormatError(f"inconsistent n: expected {n} entries", lineno, source)
                rows.append(v)
        else:
            raise FormatError(f"unexpected line in {kind} block: {line!r}", lineno, source)
    if env is None:
        raise FormatError("missing 'hilbert n=<int>' line", None, source)
    close()
    return env


def load(path: str) -> Environment:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), source=str(path))


def _vec(values) -> str:
    return ",".join(format_complex(z) for z in values)


def dumps(env: Environment) -> str:
    n = env.hilbert_dim
    out = [f"hilbert n={n}"]
    for name, value in env.bindings.items():
        if isinstance(value, Relation):
            out.append(f"relation {name}")
            for col in value.basis.T:
                out.append(f"  vec ({_vec(col[:n])} | {_vec(col[n:])})")
        else:
            out.append(f"subspace {name}")
            for col in value.basis.T:
                out.append(f"  vec ({_vec(col)})")
    return "\n".join(out) + "\n"


def save(env: Environment, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(env))
