"""Parser for Pauli-string expressions on n qubits.

Grammar (whitespace is insignificant except as a separator)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (['*'] factor)*
    factor := NUMBER | WORD | '(' expr ')'

A WORD is either site-indexed (``Z1 Z2``, ``X3``; sites are 1-based) or
positional (``ZZI``: one letter per qubit). A lone ``I`` is the identity.
Juxtaposition multiplies, so ``0.5*(Z1Z2 + II)(X3 + I)`` is valid.
"""

from __future__ import annotations

import re
from functools import reduce

import numpy as np

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<idx>[IXYZ]\d+)"
    r"|(?P<pos>[IXYZ]+(?![\dIXYZ]))"
    r"|(?P<poshead>[IXYZ])"
    r"|(?P<op>[-+*()])"
    r")"
)


class PauliSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at column {pos + 1}")
        self.pos = pos


def _tokenize(expr: str):
    pos = 0
    out = []
    while pos < len(expr):
        if expr[pos:].strip() == "":
            break
        m = _TOKEN.match(expr, pos)
        if not m or m.end() == pos:
            bad = expr[pos:].lstrip()
            col = len(expr) - len(bad)
            raise PauliSyntaxError(f"unexpected character {bad[:1]!r}", col)
        kind = m.lastgroup
        start = m.start(kind)
        text = m.group(kind)
        if kind == "poshead":
            # single letter glued to an indexed word, e.g. "IZ1": positional "I"
            kind = "pos"
        out.append((kind, text, start))
        pos = m.end()
    out.append(("end", "", len(expr)))
    return out


class _Parser:
    def __init__(self, expr: str, n_qubits: int):
        self.toks = _tokenize(expr)
        self.i = 0
        self.n = n_qubits
        self.dim = 2 ** n_qubits

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def parse(self) -> np.ndarray:
        val = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise PauliSyntaxError(f"unexpected token {text!r}", pos)
        return val

    def expr(self):
        sign = 1.0
        kind, text, _ = self.peek()
        if kind == "op" and text in "+-":
            self.take()
            sign = -1.0 if text == "-" else 1.0
        acc = sign * self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if text == "+" else acc - rhs
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            kind, text, pos = self.peek()
            if kind == "op" and text == "*":
                self.take()
                acc = _mul(acc, self.factor())
            elif kind in ("num", "idx", "pos") or (kind == "op" and text == "("):
                acc = _mul(acc, self.factor())
            else:
                return acc

    def factor(self):
        kind, text, pos = self.take()
        if kind == "num":
            return float(text)
        if kind == "op" and text == "(":
            val = self.expr()
            k2, t2, p2 = self.take()
            if not (k2 == "op" and t2 == ")"):
                raise PauliSyntaxError("expected ')'", p2)
            return val
        if kind == "idx":
            site = int(text[1:])
            if not 1 <= site <= self.n:
                raise PauliSyntaxError(
                    f"site index {site} out of range 1..{self.n}", pos)
            return self._site_op(text[0], site - 1)
        if kind == "pos":
            if text == "I":
                return np.eye(self.dim, dtype=complex)
            if len(text) != self.n:
                raise PauliSyntaxError(
                    f"positional word {text!r} has length {len(text)}, expected {self.n}", pos)
            return reduce(np.kron, [PAULI[c] for c in text])
        if kind == "end":
            raise PauliSyntaxError("unexpected end of expression", pos)
        raise PauliSyntaxError(f"unexpected token {text!r}", pos)

    def _site_op(self, letter: str, site: int) -> np.ndarray:
        mats = [PAULI["I"]] * self.n
        mats = mats[:site] + [PAULI[letter]] + mats[site + 1:]
        return reduce(np.kron, mats)


def _mul(a, b):
    if np.isscalar(a) or np.isscalar(b):
        return a * b
    return a @ b


def infer_qubits(expr: str) -> int:
    n = 0
    for kind, text, _ in _tokenize(expr):
        if kind == "idx":
            n = max(n, int(text[1:]))
        elif kind == "pos" and text != "I":
            n = max(n, len(text))
    if n == 0:
        raise PauliSyntaxError("cannot infer the number of qubits", 0)
    return n


def parse_pauli(expr: str, n_qubits: int | None = None) -> np.ndarray:
    """Evaluate a Pauli-string expression to a dense ``2^n x 2^n`` matrix."""
    if n_qubits is None:
        n_qubits = infer_qubits(expr)
    val = _Parser(expr, int(n_qubits)).parse()
    if np.isscalar(val):
        val = val * np.eye(2 ** int(n_qubits), dtype=complex)
    return np.asarray(val, dtype=complex)
