"""Words over named alphabets, free/cyclic reduction, and the two small DSLs.

The word DSL::

    word := term ("*" term)*      term := name ("^" int)?

and the group-expression DSL::

    expr := name "(" args ")" | name
    args := (expr | int | string | name "=" value) ("," ...)*

Whitespace is insignificant in both. Names in words may carry dotted
prefixes (``0.x``) added by composite engines, or be a braced atomic token
(``{0.u^5}``) for parabolic letters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple


class Letter(NamedTuple):
    gen: str
    sign: int = 1

    def inverse(self) -> "Letter":
        return Letter(self.gen, -self.sign)

    def __str__(self) -> str:
        return self.gen if self.sign == 1 else f"{self.gen}^-1"


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()
    reduced: bool = field(default=False, compare=False)

    def __post_init__(self):
        for l in self.letters:
            if not l.gen or l.sign not in (1, -1):
                raise ValueError(f"bad letter {l!r}")

    @classmethod
    def of(cls, *pairs) -> "Word":
        """``Word.of(("x", 1), ("y", -1))`` or ``Word.of("x", "y")``."""
        out = []
        for p in pairs:
            out.append(Letter(p, 1) if isinstance(p, str) else Letter(*p))
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __mul__(self, other: "Word") -> "Word":
        return self + other

    def inverse(self) -> "Word":
        return Word(tuple(l.inverse() for l in reversed(self.letters)), self.reduced)

    def power(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.letters * abs(n))

    def __str__(self) -> str:
        return print_word(self)

    def __repr__(self) -> str:
        return f"Word({print_word(self)!r})"


EMPTY = Word((), True)


def _is_inverse_pair(a: Letter, b: Letter) -> bool:
    return a.gen == b.gen and a.sign == -b.sign


def free_reduce(w: Word) -> Word:
    stack: list[Letter] = []
    for l in w.letters:
        if stack and _is_inverse_pair(stack[-1], l):
            stack.pop()
        else:
            stack.append(l)
    return Word(tuple(stack), True)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split a freely reduced ``w`` as ``conj * core * conj^-1``.

    Returns ``(core, conj)`` with ``core`` cyclically reduced.
    """
    L = w.letters
    i, j = 0, len(L) - 1
    while i < j and _is_inverse_pair(L[i], L[j]):
        i += 1
        j -= 1
    return Word(L[i:j + 1], True), Word(L[:i], True)


def rotation_period(seq) -> int:
    """Smallest p > 0 with seq equal to its rotation by p (len for aperiodic)."""
    n = len(seq)
    if n == 0:
        return 0
    # failure function of seq; the smallest period of a string is n - fail[n];
    # the rotational period is that value when it divides n
    fail = [0] * (n + 1)
    fail[0] = -1
    k = -1
    for i in range(n):
        while k >= 0 and seq[k] != seq[i]:
            k = fail[k]
        k += 1
        fail[i + 1] = k
    p = n - fail[n]
    return p if n % p == 0 else n


def cyclic_shifts(w: Word) -> frozenset[Word]:
    L = w.letters
    if not L:
        return frozenset([Word()])
    p = rotation_period(L)
    return frozenset(Word(L[i:] + L[:i], w.reduced) for i in range(p))


def min_rotation_index(seq, key=None) -> int:
    """Index of the lexicographically least rotation (Booth's algorithm)."""
    s = list(seq) if key is None else [key(x) for x in seq]
    n = len(s)
    if n == 0:
        return 0
    s = s + s
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n


# ---------------------------------------------------------------------------
# printing

def print_word(w: Word) -> str:
    """Canonical print: runs of a letter collapse to ``g^k``; empty is ``1``."""
    if not w.letters:
        return "1"
    parts = []
    run_gen, run_exp = None, 0
    for l in w.letters:
        if l.gen == run_gen and (run_exp > 0) == (l.sign > 0):
            run_exp += l.sign
            continue
        if run_gen is not None:
            parts.append(_term(run_gen, run_exp))
        run_gen, run_exp = l.gen, l.sign
    parts.append(_term(run_gen, run_exp))
    return "*".join(parts)


def _term(gen: str, exp: int) -> str:
    return gen if exp == 1 else f"{gen}^{exp}"


# ---------------------------------------------------------------------------
# errors and tokenizer

class DSLSyntaxError(ValueError):
    def __init__(self, message: str, text: str = "", offset: int = 0):
        self.offset = offset
        self.line = text.count("\n", 0, offset) + 1
        self.column = offset - (text.rfind("\n", 0, offset) + 1) + 1
        self.message = message
        super().__init__(f"{message} at line {self.line}, column {self.column} (offset {offset})")


class UnknownGeneratorError(DSLSyntaxError):
    pass


_NAME = r"(?:\d+\.)*[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)*|\{[^{}]*\}"
_TOKEN = re.compile(
    rf"(?P<ws>\s+)|(?P<name>{_NAME})|(?P<int>[+-]?\d+)"
    r"|(?P<str>'[^']*'|\"[^\"]*\")|(?P<punct>[(),=^*])"
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, kind: str, text: str | None = None) -> _Tok:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            got = "end of input" if t.kind == "end" else repr(t.text)
            raise DSLSyntaxError(f"expected {want}, got {got}", self.text, t.pos)
        self.i += 1
        return t

    def accept(self, kind: str, text: str | None = None) -> _Tok | None:
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None

    def fail(self, message: str, pos: int | None = None):
        raise DSLSyntaxError(message, self.text, self.tok.pos if pos is None else pos)


# ---------------------------------------------------------------------------
# word DSL

def parse_word(text: str, alphabet: Iterable[str] | None = None) -> Word:
    """Parse ``x*y^-1*x^2``; ``1`` or empty text is the empty word.

    With ``alphabet`` given, generator names outside it are rejected.
    """
    allowed = None if alphabet is None else set(alphabet)
    cur = _Cursor(text)
    letters: list[Letter] = []
    if cur.tok.kind == "end":
        return Word()
    while True:
        t = cur.tok
        if t.kind == "int" and t.text == "1":
            cur.i += 1
        else:
            name = cur.take("name")
            if allowed is not None and name.text not in allowed:
                raise UnknownGeneratorError(f"unknown generator {name.text!r}", text, name.pos)
            exp = 1
            if cur.accept("punct", "^"):
                e = cur.tok
                if e.kind != "int":
                    cur.fail("malformed exponent")
                cur.i += 1
                exp = int(e.text)
            sign = 1 if exp > 0 else -1
            letters.extend([Letter(name.text, sign)] * abs(exp))
        if cur.accept("punct", "*"):
            continue
        if cur.tok.kind != "end":
            cur.fail(f"expected '*' or end of word, got {cur.tok.text!r}")
        return Word(tuple(letters))


# ---------------------------------------------------------------------------
# group-expression DSL

@dataclass(frozen=True)
class GroupExpr:
    """AST node. ``params`` holds ints/strings, ``children`` sub-expressions,
    ``edge`` the two edge-subgroup generator words of an hnn node."""

    kind: str
    params: tuple = ()
    children: tuple["GroupExpr", ...] = ()
    edge: tuple[str, str] | None = None

    def to_dsl(self) -> str:
        if self.kind == "heisenberg":
            return "heisenberg"
        if self.kind == "table":
            return f"table({self.params[0]})"
        if self.kind == "hnn":
            a, b = self.edge
            return f"hnn({self.children[0].to_dsl()}, a='{a}', b='{b}')"
        args = [str(p) for p in self.params] + [c.to_dsl() for c in self.children]
        return f"{self.kind}({', '.join(args)})"

    def __str__(self) -> str:
        return self.to_dsl()

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)


# constructor -> (number of int params, number of expr children)
_ARITY = {
    "free": (1, 0),
    "cyclic": (1, 0),
    "abelian": (1, 0),
    "heisenberg": (0, 0),
    "table": (0, 0),
    "product": (0, 2),
    "direct": (0, 2),
    "hnn": (0, 1),
}


def parse_group_expr(text: str) -> GroupExpr:
    cur = _Cursor(text)
    expr = _parse_expr(cur)
    if cur.tok.kind != "end":
        cur.fail(f"trailing input {cur.tok.text!r}")
    return expr


def _parse_expr(cur: _Cursor) -> GroupExpr:
    head = cur.take("name")
    name = head.text
    if name not in _ARITY:
        raise DSLSyntaxError(f"unknown constructor {name!r}", cur.text, head.pos)
    ints: list[int] = []
    strs: list[str] = []
    kids: list[GroupExpr] = []
    kv: dict[str, str] = {}
    if cur.accept("punct", "("):
        if not cur.accept("punct", ")"):
            while True:
                t = cur.tok
                if t.kind == "int":
                    cur.i += 1
                    ints.append(int(t.text))
                elif t.kind == "str":
                    cur.i += 1
                    strs.append(t.text[1:-1])
                elif t.kind == "name" and cur.peek().text == "=" and cur.peek().kind == "punct":
                    cur.i += 2
                    v = cur.tok
                    if v.kind == "str":
                        kv[t.text] = v.text[1:-1]
                    elif v.kind in ("name", "int"):
                        kv[t.text] = v.text
                    else:
                        cur.fail("expected a value after '='")
                    cur.i += 1
                elif t.kind == "name" and name == "table" and cur.peek().text != "(":
                    cur.i += 1
                    strs.append(t.text)
                elif t.kind == "name":
                    kids.append(_parse_expr(cur))
                else:
                    cur.fail("expected an argument")
                if cur.accept("punct", ","):
                    continue
                cur.take("punct", ")")
                break
    return _build(cur, head, ints, strs, kids, kv)


def _build(cur, head, ints, strs, kids, kv) -> GroupExpr:
    name = head.text

    def arity(msg):
        raise DSLSyntaxError(f"arity error: {name} {msg}", cur.text, head.pos)

    n_int, n_kid = _ARITY[name]
    if name == "table":
        if len(strs) != 1 or ints or kids or kv:
            arity("takes exactly one group name")
        return GroupExpr("table", (strs[0],))
    if name == "hnn":
        a = kv.pop("a", None)
        b = kv.pop("b", None)
        if a is None and b is None and len(strs) == 2:
            a, b = strs
            strs = []
        if len(kids) != 1 or ints or strs or kv or a is None or b is None:
            arity("takes a base expression and edge words a=..., b=...")
        return GroupExpr("hnn", (), (kids[0],), (a, b))
    if len(ints) != n_int or len(kids) != n_kid or strs or kv:
        want = []
        if n_int:
            want.append(f"{n_int} integer")
        if n_kid:
            want.append(f"{n_kid} group expressions")
        arity("takes " + (" and ".join(want) if want else "no arguments"))
    if name in ("free", "abelian") and ints[0] < 0:
        arity("rank must be >= 0")
    if name == "cyclic" and ints[0] < 1:
        arity("order must be >= 1")
    return GroupExpr(name, tuple(ints), tuple(kids))
