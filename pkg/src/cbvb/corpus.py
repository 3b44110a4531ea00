"""Named combinators and the lookup used by the command line.

The built-in table holds the usual combinators plus a few terms that serve
as running examples (``Xi``, ``A``, ``DeltaI``).  Extra names can be loaded
from the file named by ``CBVB_CORPUS``, one ``name = term`` per line.
"""

from __future__ import annotations

import os
from pathlib import Path

from .syntax import ParseError, SourceSpan, parse_term
from .terms import Term

__all__ = ["BUILTIN", "corpus", "lookup", "resolve", "load_corpus_file", "CORPUS_ENV"]

CORPUS_ENV = "CBVB_CORPUS"

_Z = r"(\f.(\y.f (\z.y y z))(\y.f (\z.y y z)))"
_K = r"(\x y.x)"
_B = r"(\f g x.f (g x))"
_I = r"(\x.x)"
_DELTA = r"(\x.x x)"

BUILTIN_SOURCE: dict[str, str] = {
    "I": _I,
    "K": _K,
    "F": r"\x y.y",
    "B": _B,
    "Delta": _DELTA,
    "Omega": f"{_DELTA} {_DELTA}",
    "Z": _Z,
    "Kstar": f"{_Z} {_K}",
    "ZB": f"{_Z} {_B}",
    "Xi": f"{_Z} (\\f.(\\y1.f {_I})(z z))",
    "A": r"(\z.(\y.y)(z z))(x x)",
    "DeltaI": f"{_DELTA} {_I}",
}

BUILTIN: dict[str, Term] = {k: parse_term(v) for k, v in BUILTIN_SOURCE.items()}


def load_corpus_file(path: str | os.PathLike) -> dict[str, Term]:
    """Read ``name = term`` lines; blank lines and ``#`` comments are skipped."""
    text = Path(path).read_text(encoding="utf-8")
    out: dict[str, Term] = {}
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.rstrip("\r\n").split("#", 1)[0]
        if line.strip():
            name, sep, body = line.partition("=")
            name = name.strip()
            if not sep or not name:
                raise ParseError("expected 'name = term'", SourceSpan(offset, offset + len(line)), text)
            start = offset + line.index("=") + 1
            try:
                out[name] = parse_term(body)
            except ParseError as exc:
                span = SourceSpan(start + exc.span.start, start + exc.span.end)
                raise ParseError(exc.message, span, text) from exc
        offset += len(raw)
    return out


def corpus() -> dict[str, Term]:
    """Built-in names overlaid with the file from ``CBVB_CORPUS``, if set."""
    table = dict(BUILTIN)
    extra = os.environ.get(CORPUS_ENV)
    if extra:
        table.update(load_corpus_file(extra))
    return table


def lookup(name: str, table: dict[str, Term] | None = None) -> Term | None:
    """Exact match first, then a case-insensitive one.

    One-letter names only match exactly, so ``a`` and ``k`` stay variables.
    """
    table = corpus() if table is None else table
    if name in table:
        return table[name]
    if len(name) > 1:
        folded = name.casefold()
        for key, value in table.items():
            if key.casefold() == folded:
                return value
    return None


def resolve(text: str, table: dict[str, Term] | None = None) -> Term:
    """A corpus name or a term in concrete syntax."""
    hit = lookup(text.strip(), table)
    return hit if hit is not None else parse_term(text)
