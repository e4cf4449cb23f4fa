"""Independent reference computations used by the test suite.

Nothing here calls the engines' canonical forms: words are manipulated as
plain strings or integer matrices, and classes are formed by explicit search.
"""

from __future__ import annotations

from cgw.growth import UnionFind, enumerate_ball

# ---------------------------------------------------------------------------
# free groups as strings: lowercase = generator, uppercase = inverse


def sfree_reduce(s: str) -> str:
    out = []
    for ch in s:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def sinv(s: str) -> str:
    return s[::-1].swapcase()


def reduced_words(alphabet: str, n: int) -> list[str]:
    """All freely reduced words of length exactly n."""
    letters = alphabet + alphabet.upper()
    words = [""]
    for _ in range(n):
        words = [w + c for w in words for c in letters if not (w and w[-1] == c.swapcase())]
    return words


def cyclically_reduced(s: str) -> bool:
    return sfree_reduce(s) == s and not (len(s) >= 2 and s[0] == s[-1].swapcase())


def necklace_xi(alphabet: str, N: int) -> list[int]:
    """xi(n) for a free group: 1 + classes of cyclically reduced words of
    length 1..n, grouped by rotation."""
    per_len = []
    for k in range(1, N + 1):
        seen = set()
        for w in reduced_words(alphabet, k):
            if cyclically_reduced(w):
                seen.add(min(w[i:] + w[:i] for i in range(k)))
        per_len.append(len(seen))
    out, total = [1], 1
    for c in per_len:
        total += c
        out.append(total)
    return out


def all_cancellation_orders(s: str) -> set[str]:
    """Every terminal word reachable by cancelling adjacent inverse pairs in
    any order."""
    seen, stack, terminal = {s}, [s], set()
    while stack:
        w = stack.pop()
        moves = [i for i in range(len(w) - 1) if w[i] == w[i + 1].swapcase()]
        if not moves:
            terminal.add(w)
        for i in moves:
            v = w[:i] + w[i + 2:]
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return terminal


# ---------------------------------------------------------------------------
# matrix representations

def matmul(A, B):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0])))
        for i in range(len(A))
    )


SANOV = {"x": ((1, 2), (0, 1)), "X": ((1, -2), (0, 1)),
         "y": ((1, 0), (2, 1)), "Y": ((1, 0), (-2, 1))}


def sanov(s: str):
    M = ((1, 0), (0, 1))
    for ch in s:
        M = matmul(M, SANOV[ch])
    return M


# Z3 * Z3 is the index-2 subgroup of PSL(2, Z) generated by the order-3
# elements u = ST and v = TS, with S = [[0,-1],[1,0]] and T = [[1,1],[0,1]].
_S = ((0, -1), (1, 0))
_T = ((1, 1), (0, 1))
PSL_U = matmul(_S, _T)
PSL_V = matmul(_T, _S)


def psl_normal(M):
    """Representative of +-M."""
    flat = [M[0][0], M[0][1], M[1][0], M[1][1]]
    first = next(v for v in flat if v)
    return M if first > 0 else tuple(tuple(-v for v in row) for row in M)


def heis(a, b, c):
    return ((1, a, c), (0, 1, b), (0, 0, 1))


# ---------------------------------------------------------------------------
# brute-force conjugacy classes

def brute_classes(e, n: int, conj_radius: int, length=None) -> list[int]:
    """xi(0..n) by union-find over conjugation by generators, exploring
    t^-1 g t for all |t| <= conj_radius. Each step changes word length by at
    most 2, so states that can no longer return to the radius-n ball are
    pruned without losing any merge. ``length`` defaults to the engine's
    closed form; None from it means "too long" when pruning is requested
    through ``length``, and "unknown" (no pruning) otherwise."""
    ball = enumerate_ball(e, n)
    steps = [s for _, s in e.symmetric_generators()]
    uf = UnionFind()
    for g in ball.members:
        uf.add(g)
    geo = length or e.geodesic_length
    none_is_far = length is not None
    for g in ball.members:
        seen = {g: 0}
        frontier = [g]
        for depth in range(1, conj_radius + 1):
            nxt = []
            remaining = conj_radius - depth
            for h in frontier:
                for s in steps:
                    k = e.mul(e.mul(e.inv(s), h), s)
                    if k in seen:
                        continue
                    L = geo(k)
                    if (L is None and none_is_far) or (L is not None and L - 2 * remaining > n):
                        continue
                    seen[k] = depth
                    nxt.append(k)
                    if k in ball.members:
                        uf.union(g, k)
            frontier = nxt
    first = {}
    for g, r in ball.members.items():
        root = uf.find(g)
        first[root] = min(first.get(root, r), r)
    out = []
    for m in range(n + 1):
        out.append(sum(1 for r in first.values() if r <= m))
    return out


# ---------------------------------------------------------------------------
# small cancellation pieces over F2, word level


def _rotations(s: str) -> list[str]:
    return [s[i:] + s[:i] for i in range(len(s))]


def symmetrized_strings(words) -> list[str]:
    out = []
    for w in words:
        for v in (w, sinv(w)):
            for r in _rotations(v):
                if r not in out:
                    out.append(r)
    return out


def brute_pieces(members: list[str], eps: int) -> set[tuple]:
    """Piece identities (kind, i, |U|, j, start of U', |U'|) by a scan over
    subword pairs, joining reduced words Y^-1 U' against U Z (or U^-1 Z)."""
    yz = [w for k in range(eps + 1) for w in reduced_words("xy", k)]
    out = set()
    # eps-pieces: R_i = U V, R_j = U' V', Y^-1 U' = U Z, Y R_i Y^-1 != R_j
    uz = {}
    for i, r in enumerate(members):
        for k in range(1, len(r) + 1):
            for z in yz:
                uz.setdefault(sfree_reduce(r[:k] + z), []).append((i, k))
    for j, r2 in enumerate(members):
        for l in range(1, len(r2) + 1):
            for y in yz:
                for i, k in uz.get(sfree_reduce(sinv(y) + r2[:l]), ()):
                    if sfree_reduce(y + members[i] + sinv(y)) != sfree_reduce(members[j]):
                        out.add(("eps", i, k, j, 0, l))
    # eps'-pieces: R_i = U V U' V' with U' = Y U^(+-1) Z
    for i, r in enumerate(members):
        n = len(r)
        for k in range(1, n):
            U = r[:k]
            targets = {sfree_reduce(u + z) for u in (U, sinv(U)) for z in yz}
            for s in range(k, n):
                for l in range(1, n - s + 1):
                    if any(sfree_reduce(sinv(y) + r[s:s + l]) in targets for y in yz):
                        out.add(("eps'", i, k, i, s, l))
    return out


def to_string(w) -> str:
    """cgw Word over x, y -> string form."""
    return "".join(l.gen if l.sign == 1 else l.gen.upper() for l in w.letters)


def string_word(s: str):
    from cgw.wordlang import Letter, Word

    return Word(tuple(Letter(ch.lower(), 1 if ch.islower() else -1) for ch in s))


# ---------------------------------------------------------------------------
# hnn(free(2), a='x', b='y'): t^-1 x t = y. Eliminating y = t^-1 x t shows
# the group is free on x, t, which gives a faithful string model.

def hnn_xy_image(syllables) -> str:
    """Free-reduced image in F(x, t) of an alternating sequence of base
    strings (over x, y) and signs."""
    parts = []
    for idx, s in enumerate(syllables):
        if idx % 2:
            parts.append("t" if s == 1 else "T")
        else:
            parts.append(s.replace("y", "Txt").replace("Y", "TXt"))
    return sfree_reduce("".join(parts))


def _power_of(s: str, ch: str):
    if all(c == ch for c in s):
        return len(s)
    if all(c == ch.upper() for c in s):
        return -len(s)
    return None


def _pinches(syl):
    out = []
    for i in range(1, len(syl) - 2, 2):
        e1, g, e2 = syl[i], syl[i + 1], syl[i + 2]
        if e1 == -1 and e2 == 1:
            k = _power_of(g, "x")
            if k is not None:
                out.append((i, "y" * k if k >= 0 else "Y" * -k))
        elif e1 == 1 and e2 == -1:
            k = _power_of(g, "y")
            if k is not None:
                out.append((i, "x" * k if k >= 0 else "X" * -k))
    return out


def hnn_all_orders(syllables) -> tuple[set, bool]:
    """(sign sequences of every pinch-free form reachable by removing pinches
    in any order, whether the input itself is pinch-free). Base syllables
    must be freely reduced strings."""
    start = tuple(syllables)
    moves = _pinches(start)
    if not moves:
        return {start[1::2]}, True
    seen, stack, terminal = {start}, [start], set()
    while stack:
        syl = stack.pop()
        moves = _pinches(syl)
        if not moves:
            terminal.add(syl[1::2])
        for i, repl in moves:
            merged = sfree_reduce(syl[i - 1] + repl + syl[i + 3])
            nxt = syl[:i - 1] + (merged,) + syl[i + 4:]
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return terminal, False
