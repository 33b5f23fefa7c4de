"""Text formats for nets and semilinear sets.

Net files:
    dim <d>
    action <name> : <d naturals> -> <d naturals>

Semilinear set files, one component per line (an empty file is the empty set):
    linear base <d naturals> [periods ( <d naturals> ) ( <d naturals> ) ...]

'#' starts a comment; blank lines are ignored.  Both formats round-trip.
"""
from __future__ import annotations

import re

from .nets import Action, PetriNet
from .semilinear import LinearSet, SemilinearSet
from .vectors import Vector


class ParseError(ValueError):
    """Syntax or consistency error in a net or set file, with position."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _tokenize(line: str) -> list[tuple[str, int]]:
    """Tokens with 1-based column positions; text after '#' is dropped."""
    body = line.split("#", 1)[0]
    out = []
    col = 0
    while col < len(body):
        if body[col].isspace():
            col += 1
            continue
        start = col
        while col < len(body) and not body[col].isspace():
            col += 1
        out.append((body[start:col], start + 1))
    return out


def _parse_nat(tok: str, lineno: int, col: int) -> int:
    if not tok.isdigit():
        raise ParseError(lineno, col, f"expected a natural number, got {tok!r}")
    return int(tok)


def parse_net(text: str) -> PetriNet:
    dim: int | None = None
    actions: list[Action] = []
    names: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokenize(raw)
        if not toks:
            continue
        head, headcol = toks[0]
        if head == "dim":
            if dim is not None:
                raise ParseError(lineno, headcol, "duplicate dim declaration")
            if len(toks) != 2:
                raise ParseError(lineno, headcol, "dim takes exactly one number")
            dim = _parse_nat(toks[1][0], lineno, toks[1][1])
            if dim < 1:
                raise ParseError(lineno, toks[1][1], "dimension must be at least 1")
        elif head == "action":
            if dim is None:
                raise ParseError(lineno, headcol, "dim must be declared before actions")
            rest = toks[1:]
            if not rest:
                raise ParseError(lineno, headcol, "action needs a name")
            name, namecol = rest[0]
            if not _NAME.match(name):
                raise ParseError(lineno, namecol, f"invalid action name {name!r}")
            if name in names:
                raise ParseError(
                    lineno, namecol, f"duplicate action name {name!r} (first on line {names[name]})"
                )
            body = rest[1:]
            if not body or body[0][0] != ":":
                raise ParseError(lineno, namecol, "expected ':' after action name")
            body = body[1:]
            expected = 2 * dim + 1
            if len(body) != expected:
                raise ParseError(
                    lineno,
                    body[0][1] if body else namecol,
                    f"expected {dim} naturals, '->', {dim} naturals",
                )
            pre_toks, arrow, post_toks = body[:dim], body[dim], body[dim + 1 :]
            if arrow[0] != "->":
                raise ParseError(lineno, arrow[1], f"expected '->', got {arrow[0]!r}")
            pre = tuple(_parse_nat(t, lineno, c) for t, c in pre_toks)
            post = tuple(_parse_nat(t, lineno, c) for t, c in post_toks)
            names[name] = lineno
            actions.append(Action(pre, post, name))
        else:
            raise ParseError(lineno, headcol, f"unknown directive {head!r}")
    if dim is None:
        raise ParseError(1, 1, "missing dim declaration")
    return PetriNet(dim, tuple(actions))


def format_net(net: PetriNet) -> str:
    lines = [f"dim {net.dim}"]
    for a in net.actions:
        pre = " ".join(str(x) for x in a.pre)
        post = " ".join(str(x) for x in a.post)
        lines.append(f"action {a.name} : {pre} -> {post}")
    return "\n".join(lines) + "\n"


def _parse_vector(
    toks: list[tuple[str, int]], start: int, count: int, lineno: int
) -> Vector:
    if start + count > len(toks):
        col = toks[-1][1] if toks else 1
        raise ParseError(lineno, col, f"expected {count} naturals")
    return tuple(
        _parse_nat(toks[start + j][0], lineno, toks[start + j][1]) for j in range(count)
    )


def parse_semilinear(text: str) -> SemilinearSet:
    components: list[LinearSet] = []
    dim: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokenize(raw)
        if not toks:
            continue
        if toks[0][0] != "linear":
            raise ParseError(lineno, toks[0][1], f"expected 'linear', got {toks[0][0]!r}")
        if len(toks) < 2 or toks[1][0] != "base":
            col = toks[1][1] if len(toks) > 1 else toks[0][1]
            raise ParseError(lineno, col, "expected 'base' after 'linear'")
        # the base runs until 'periods' or end of line
        i = 2
        base_toks = []
        while i < len(toks) and toks[i][0] != "periods":
            base_toks.append(toks[i])
            i += 1
        if not base_toks:
            raise ParseError(lineno, toks[1][1], "base needs at least one coordinate")
        base = tuple(_parse_nat(t, lineno, c) for t, c in base_toks)
        if dim is None:
            dim = len(base)
        elif len(base) != dim:
            raise ParseError(
                lineno, base_toks[0][1], f"component of dimension {len(base)}, expected {dim}"
            )
        periods: list[Vector] = []
        if i < len(toks):
            i += 1  # past 'periods'
            if i >= len(toks):
                raise ParseError(lineno, toks[-1][1], "periods needs at least one '( ... )' group")
            while i < len(toks):
                if toks[i][0] != "(":
                    raise ParseError(lineno, toks[i][1], f"expected '(', got {toks[i][0]!r}")
                vec = _parse_vector(toks, i + 1, dim, lineno)
                i += 1 + dim
                if i >= len(toks) or toks[i][0] != ")":
                    col = toks[i][1] if i < len(toks) else toks[-1][1]
                    raise ParseError(lineno, col, "expected ')'")
                i += 1
                periods.append(vec)
        components.append(LinearSet(base, tuple(periods)))
    return SemilinearSet(tuple(components))


def format_semilinear(s: SemilinearSet) -> str:
    lines = []
    for c in s.components:
        parts = ["linear base " + " ".join(str(x) for x in c.base)]
        if c.periods:
            groups = " ".join("( " + " ".join(str(x) for x in p) + " )" for p in c.periods)
            parts.append("periods " + groups)
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")
