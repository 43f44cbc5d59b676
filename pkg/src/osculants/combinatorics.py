"""Fixed-content necklaces: enumeration, counting and the parity facts behind them.

A necklace with content ``d = (d_1, ..., d_n)`` is a circular word with ``d_i``
beads of color ``i`` taken modulo rotation.  Words are tuples over the colors
``1..n`` stored in their lexicographically least rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

_SYMBOLS = "123456789abcdefghijklmnopqrstuvwxyz"

BALANCE_TOL = 1e-10


@dataclass(frozen=True)
class Multidegree:
    """Ordered vector of positive degrees."""

    d: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.d)
        if len(d) < 1:
            raise ValueError("multidegree needs at least one entry")
        if any(x < 1 for x in d):
            raise ValueError(f"multidegree entries must be positive, got {d}")
        object.__setattr__(self, "d", d)

    @classmethod
    def parse(cls, value: str | Sequence[int] | "Multidegree") -> "Multidegree":
        """Accept ``"4,4"``, ``[4, 4]`` or an existing Multidegree."""
        if isinstance(value, Multidegree):
            return value
        if isinstance(value, str):
            parts = [p for p in value.replace(" ", "").split(",") if p]
            return cls(tuple(int(p) for p in parts))
        return cls(tuple(value))

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def total(self) -> int:
        return sum(self.d)

    @property
    def gcd(self) -> int:
        return math.gcd(*self.d)

    def divided(self, k: int) -> "Multidegree":
        if any(x % k for x in self.d):
            raise ValueError(f"{k} does not divide every entry of {self.d}")
        return Multidegree(tuple(x // k for x in self.d))

    def __iter__(self):
        return iter(self.d)

    def __len__(self):
        return len(self.d)

    def __str__(self):
        return ",".join(map(str, self.d))


def _as_multidegree(d) -> Multidegree:
    return Multidegree.parse(d)


def canonical_rotation(word: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least rotation of ``word``."""
    w = tuple(word)
    if not w:
        return w
    return min(w[r:] + w[:r] for r in range(len(w)))


def orbit_size(word: Sequence[int]) -> int:
    """Number of distinct rotations of ``word``."""
    w = tuple(word)
    N = len(w)
    for r in range(1, N + 1):
        if N % r == 0 and w[r:] + w[:r] == w:
            return r
    return N


@dataclass(frozen=True)
class Necklace:
    word: tuple[int, ...]
    content: Multidegree

    def __post_init__(self):
        word = tuple(int(c) for c in self.word)
        content = _as_multidegree(self.content)
        counts = [0] * content.n
        for c in word:
            if not 1 <= c <= content.n:
                raise ValueError(f"color {c} outside 1..{content.n}")
            counts[c - 1] += 1
        if tuple(counts) != content.d:
            raise ValueError(f"word {word} does not have content {content.d}")
        if word != canonical_rotation(word):
            raise ValueError(f"word {word} is not in canonical (least) rotation")
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "content", content)

    @classmethod
    def from_word(cls, word: Sequence[int] | str, n: int | None = None) -> "Necklace":
        """Build the necklace of an arbitrary word, canonicalizing its rotation."""
        if isinstance(word, str):
            word = tuple(_SYMBOLS.index(ch) + 1 for ch in word)
        word = tuple(word)
        n = max(word) if n is None else n
        content = Multidegree(tuple(word.count(i) for i in range(1, n + 1)))
        return cls(canonical_rotation(word), content)

    @property
    def length(self) -> int:
        return len(self.word)

    def positions(self, color: int) -> list[int]:
        """0-based positions of ``color`` in the canonical word, ascending."""
        return [b for b, c in enumerate(self.word) if c == color]

    def is_primitive(self) -> bool:
        return orbit_size(self.word) == len(self.word)

    def __str__(self):
        return necklace_to_string(self)


def necklace_to_string(nk: Necklace) -> str:
    return "".join(_SYMBOLS[c - 1] for c in nk.word)


def necklace_from_string(s: str, n: int | None = None) -> Necklace:
    return Necklace.from_word(s, n)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def iter_necklace_words(d, primitive_only: bool = False) -> Iterator[tuple[int, ...]]:
    """Yield the canonical words of all necklaces with content ``d``.

    Fixed-content prenecklace generation: the word is extended in
    lexicographic order, ``p`` tracking the period of the current
    prenecklace; a full word is a necklace iff ``p`` divides its length and
    a Lyndon (primitive) word iff ``p`` equals it.
    """
    d = _as_multidegree(d)
    N, k = d.total, d.n
    remaining = list(d.d)
    a = [0] * (N + 1)  # a[0] is a sentinel, a[1..N] the word (0-based colors)
    a[1] = 0
    remaining[0] -= 1
    if N == 1:
        yield (1,)
        return

    def gen(t: int, p: int):
        if t > N:
            if (p == N) if primitive_only else (N % p == 0):
                yield tuple(c + 1 for c in a[1:])
            return
        for j in range(a[t - p], k):
            if remaining[j] == 0:
                continue
            a[t] = j
            remaining[j] -= 1
            yield from gen(t + 1, p if j == a[t - p] else t)
            remaining[j] += 1

    yield from gen(2, 1)


def enumerate_necklaces(d, primitive_only: bool = False) -> list[Necklace]:
    """Every necklace with content ``d`` exactly once, in lexicographic order."""
    d = _as_multidegree(d)
    # words from the generator are canonical by construction
    out = []
    for w in iter_necklace_words(d, primitive_only):
        nk = object.__new__(Necklace)
        object.__setattr__(nk, "word", w)
        object.__setattr__(nk, "content", d)
        out.append(nk)
    return out


def brute_force_necklace_codes(d, primitive_only: bool = False) -> np.ndarray:
    """Oracle: sorted base-``n`` codes of the canonical words, by rotation grouping.

    All ``C(|d|, d)`` words are built as a numpy array, encoded base ``n`` and
    reduced to the least code over their rotations.  Independent of
    :func:`iter_necklace_words`.
    """
    d = _as_multidegree(d)
    words = all_words(d)
    N, n = d.total, d.n
    codes = _encode(words, n)
    high = n ** (N - 1)
    rot = codes.copy()
    best = codes.copy()
    period = np.full(codes.shape, N, dtype=np.int64)
    for r in range(1, N):
        rot = (rot % high) * n + rot // high
        np.minimum(best, rot, out=best)
        hit = (rot == codes) & (period == N)
        period[hit] = r
    keep = best[period == N] if primitive_only else best
    return np.unique(keep)


def brute_force_necklace_words(d, primitive_only: bool = False) -> set[tuple[int, ...]]:
    """The oracle of :func:`brute_force_necklace_codes` as a set of 1-based words."""
    d = _as_multidegree(d)
    codes = brute_force_necklace_codes(d, primitive_only)
    return {tuple(int(c) + 1 for c in _decode(code, d.n, d.total)) for code in codes}


def encode_words(words, n: int) -> np.ndarray:
    """Base-``n`` codes of 1-based words (rows), comparable with the brute-force codes."""
    w = np.asarray(words, dtype=np.int64)
    if w.ndim != 2:
        w = w.reshape(len(w), -1)
    return _encode(w - 1, n)


def all_words(d) -> np.ndarray:
    """All words with content ``d`` as rows of a (C(|d|,d), |d|) array of 0-based colors."""
    d = _as_multidegree(d)
    N, n = d.total, d.n
    words = np.zeros((1, 0), dtype=np.int8)
    rem = np.array([d.d], dtype=np.int16)
    for _ in range(N):
        new_w, new_r = [], []
        for c in range(n):
            sel = rem[:, c] > 0
            if not sel.any():
                continue
            w = np.concatenate([words[sel], np.full((sel.sum(), 1), c, dtype=np.int8)], axis=1)
            r = rem[sel].copy()
            r[:, c] -= 1
            new_w.append(w)
            new_r.append(r)
        words = np.concatenate(new_w)
        rem = np.concatenate(new_r)
    return words


def _encode(words: np.ndarray, n: int) -> np.ndarray:
    codes = np.zeros(words.shape[0], dtype=np.int64)
    for col in range(words.shape[1]):
        codes = codes * n + words[:, col]
    return codes


def _decode(code: int, n: int, N: int) -> list[int]:
    out = []
    code = int(code)
    for _ in range(N):
        out.append(code % n)
        code //= n
    return out[::-1]


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

def multinomial(d) -> int:
    d = _as_multidegree(d)
    out, acc = 1, 0
    for x in d.d:
        acc += x
        out *= math.comb(acc, x)
    return out


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


@lru_cache(maxsize=None)
def _count_primitive(d: tuple[int, ...]) -> int:
    md = Multidegree(d)
    N = md.total
    acc = multinomial(md)
    for k in divisors(md.gcd):
        if k != 1:
            acc -= (N // k) * _count_primitive(md.divided(k).d)
    q, r = divmod(acc, N)
    if r:
        raise ArithmeticError(f"primitive-necklace recursion not integral at {d}")
    return q


def count_primitive(d) -> int:
    """Number of primitive necklaces with content ``d`` (exact integer)."""
    return _count_primitive(_as_multidegree(d).d)


def count_all(d) -> int:
    """Total number of necklaces with content ``d``: sum of primitive counts of ``d/k``."""
    d = _as_multidegree(d)
    return sum(count_primitive(d.divided(k)) for k in divisors(d.gcd))


def recursion_identity_holds(d) -> bool:
    """Check ``C(|d|, d) == sum_{k | gcd} (|d|/k) * N_{d/k}`` exactly."""
    d = _as_multidegree(d)
    rhs = sum((d.total // k) * count_primitive(d.divided(k)) for k in divisors(d.gcd))
    return rhs == multinomial(d)


def fold_class(nk: Necklace) -> tuple[int, Necklace]:
    """Return ``(k, core)`` with the word equal to ``core`` repeated ``k`` times."""
    N = nk.length
    p = orbit_size(nk.word)
    k = N // p
    core_word = nk.word[:p]
    return k, Necklace.from_word(core_word, nk.content.n)


# ---------------------------------------------------------------------------
# symmetry predicates
# ---------------------------------------------------------------------------

def _rotations(word: tuple[int, ...]) -> set[tuple[int, ...]]:
    return {word[r:] + word[:r] for r in range(len(word))}


def is_self_complementary(nk: Necklace) -> bool:
    """Swapping the two colors yields a rotation of the same word."""
    if nk.content.n != 2:
        raise ValueError("self-complementarity is defined for two colors only")
    swapped = tuple(3 - c for c in nk.word)
    return swapped in _rotations(nk.word)


def is_achiral(nk: Necklace) -> bool:
    """Reversing the word yields a rotation of the same word."""
    return tuple(reversed(nk.word)) in _rotations(nk.word)


def count_selfcomp_achiral(N: int) -> int:
    """Self-complementary achiral necklaces on ``2N`` beads, by the closed form."""
    if N < 1:
        raise ValueError("N must be positive")
    r, m = 0, N
    while m % 2 == 0:
        m //= 2
        r += 1
    # i = -1 term: ceil(m/2) with m odd is (m+1)/2
    total = 2 ** ((m + 1) // 2 - 1)
    for i in range(0, r):
        total += 2 ** (2**i * m - 1)
    return total


def brute_force_selfcomp_achiral(N: int) -> int:
    """Oracle for :func:`count_selfcomp_achiral`: scan every 2-coloring of 2N beads."""
    L = 2 * N
    seen = set()
    count = 0
    for code in range(2**L):
        w = tuple(((code >> (L - 1 - b)) & 1) + 1 for b in range(L))
        can = canonical_rotation(w)
        if can in seen:
            continue
        seen.add(can)
        rots = _rotations(can)
        if tuple(3 - c for c in can) in rots and tuple(reversed(can)) in rots:
            count += 1
    return count


def is_squarefree(d: int) -> bool:
    if d < 1:
        raise ValueError("d must be positive")
    p = 2
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        p += 1
    return True


def squarefree_parity(d: int) -> int:
    """Predicted parity (1 = odd) of the primitive (d, d)-necklace count."""
    return 1 if is_squarefree(d) else 0


# ---------------------------------------------------------------------------
# embedding via roots of -1
# ---------------------------------------------------------------------------

def color_root_sums(nk: Necklace) -> np.ndarray:
    """Per-color sums of the |d|-th roots of -1 sitting at that color's positions."""
    N = nk.length
    b = np.arange(N)
    zeta = np.exp(1j * np.pi * (2 * b + 1) / N)
    word = np.asarray(nk.word)
    return np.array([zeta[word == i].sum() for i in range(1, nk.content.n + 1)])


def is_balanced_embedding(nk: Necklace, tol: float = BALANCE_TOL) -> bool:
    """True iff every color's root sum vanishes (a singular start osculant)."""
    if not nk.is_primitive():
        raise ValueError("balanced-embedding test expects a primitive necklace")
    return bool(np.all(np.abs(color_root_sums(nk)) <= tol))


def find_balanced_necklaces(d, tol: float = BALANCE_TOL) -> list[Necklace]:
    """Exhaustive scan of primitive ``d``-necklaces for balanced embeddings (vectorized)."""
    d = _as_multidegree(d)
    N = d.total
    words = np.array(list(iter_necklace_words(d, primitive_only=True)), dtype=np.int8)
    if words.size == 0:
        return []
    zeta = np.exp(1j * np.pi * (2 * np.arange(N) + 1) / N)
    ok = np.ones(len(words), dtype=bool)
    for i in range(1, d.n + 1):
        sums = ((words == i) * zeta).sum(axis=1)
        ok &= np.abs(sums) <= tol
    return [Necklace(tuple(int(c) for c in w), d) for w in words[ok]]
