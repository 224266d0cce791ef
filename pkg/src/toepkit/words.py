"""Finite-word combinatorics over small indexed alphabets.

Words are immutable byte strings of letter indices tied to an Alphabet.
Everything here is pure; values can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class Alphabet:
    """Ordered set of letters, indexed 0..n-1, each with a display name."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Sequence[str]):
        names = tuple(str(n) for n in names)
        if not names:
            raise ValueError("alphabet must be non-empty")
        if len(names) > 255:
            raise ValueError("alphabets are limited to 255 letters")
        if len(set(names)) != len(names):
            raise ValueError("letter names must be distinct")
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return "Alphabet(%s)" % (" ".join(self.names))

    def index(self, name: str) -> int:
        return self._index[name]

    @property
    def compact(self) -> bool:
        return all(len(n) == 1 for n in self.names)

    def word(self, letters: Iterable[int | str]) -> "Word":
        idx = []
        for a in letters:
            if isinstance(a, str):
                a = self._index[a]
            if not 0 <= a < len(self.names):
                raise ValueError("letter index %r out of range" % (a,))
            idx.append(a)
        return Word(self, bytes(idx))

    def parse(self, text: str) -> "Word":
        """Parse a word: space-separated names, or one char per letter
        when every name is a single character."""
        text = text.strip()
        if not text:
            return Word(self, b"")
        if " " in text or not self.compact:
            return self.word(text.split())
        return self.word(list(text))

    def empty(self) -> "Word":
        return Word(self, b"")


class Word:
    """Immutable word over an Alphabet, stored as bytes of letter indices."""

    __slots__ = ("alphabet", "data")

    def __init__(self, alphabet: Alphabet, data: bytes):
        self.alphabet = alphabet
        self.data = data

    def __len__(self):
        return len(self.data)

    def __iter__(self) -> Iterator[int]:
        return iter(self.data)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.alphabet, self.data[i])
        return self.data[i]

    def __add__(self, other: "Word") -> "Word":
        _check_same_alphabet(self, other)
        return Word(self.alphabet, self.data + other.data)

    def __mul__(self, k: int) -> "Word":
        return Word(self.alphabet, self.data * k)

    def __eq__(self, other):
        return (
            isinstance(other, Word)
            and self.alphabet == other.alphabet
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.alphabet, self.data))

    def __lt__(self, other: "Word"):
        return (len(self.data), self.data) < (len(other.data), other.data)

    def __repr__(self):
        return "Word(%s)" % (self.display() or "<empty>")

    def display(self) -> str:
        names = self.alphabet.names
        if self.alphabet.compact:
            return "".join(names[b] for b in self.data)
        return " ".join(names[b] for b in self.data)

    def sub(self, i: int, j: int) -> "Word":
        """The subword at positions [i, j)."""
        if not 0 <= i <= j <= len(self.data):
            raise IndexError("subword range [%d,%d) out of bounds" % (i, j))
        return Word(self.alphabet, self.data[i:j])

    def reverse(self) -> "Word":
        return Word(self.alphabet, self.data[::-1])

    def starts_with(self, other: "Word") -> bool:
        return self.data.startswith(other.data)

    def ends_with(self, other: "Word") -> bool:
        return self.data.endswith(other.data)


def _check_same_alphabet(*words: Word) -> Alphabet:
    alph = words[0].alphabet
    for w in words[1:]:
        if w.alphabet != alph:
            raise ValueError("alphabet mismatch")
    return alph


def occurrences(w: Word, u: Word) -> list[int]:
    """All positions i with u[i, i+|w|) = w, ascending (overlaps included)."""
    _check_same_alphabet(w, u)
    if len(w) == 0:
        return list(range(len(u) + 1))
    out = []
    i = u.data.find(w.data)
    while i != -1:
        out.append(i)
        i = u.data.find(w.data, i + 1)
    return out


def common_prefix_length(u: Word, v: Word) -> int:
    n = min(len(u), len(v))
    for i in range(n):
        if u.data[i] != v.data[i]:
            return i
    return n


def common_suffix_length(u: Word, v: Word) -> int:
    n = min(len(u), len(v))
    for i in range(1, n + 1):
        if u.data[-i] != v.data[-i]:
            return i - 1
    return n


def primitive_root(u: Word) -> tuple[Word, int]:
    """Shortest w and maximal k with u = w^k."""
    n = len(u)
    if n == 0:
        raise ValueError("empty word has no primitive root")
    for ell in range(1, n + 1):
        if n % ell:
            continue
        if u.data[:ell] * (n // ell) == u.data:
            return u.sub(0, ell), n // ell
    raise AssertionError("unreachable")


def is_euclidean_pair(u: Word, v: Word) -> bool:
    """True iff u and v are powers of a common word."""
    _check_same_alphabet(u, v)
    if len(u) == 0 or len(v) == 0:
        raise ValueError("Euclidean pair test needs non-empty words")
    return primitive_root(u)[0] == primitive_root(v)[0]


@dataclass(frozen=True)
class DistinguishedAffix:
    """Forced common prefix (or suffix) of all long concatenation
    extensions of a non-Euclidean pair, with forced disagreement just after
    (just before, for suffixes)."""

    word: Word

    @property
    def length(self) -> int:
        return len(self.word)


def _letter_sets(first: Word, u: Word, v: Word, upto: int) -> list[frozenset[int]]:
    # states: (word, offset) positions reachable at step i in first·{u,v}^omega
    words = (first, u, v)
    states = {(0, 0)}
    sets = []
    for _ in range(upto):
        letters = frozenset(words[w].data[o] for w, o in states)
        sets.append(letters)
        nxt = set()
        for w, o in states:
            if o + 1 < len(words[w]):
                nxt.add((w, o + 1))
            else:
                nxt.add((1, 0))
                nxt.add((2, 0))
        states = nxt
    return sets


def distinguished_prefix(u: Word, v: Word) -> DistinguishedAffix:
    """The common prefix alpha forced on every long word of u{u,v}* and
    v{u,v}*, where the two families disagree right after alpha.

    Raises ValueError on Euclidean pairs (no disagreement is ever forced).
    The returned length is always < |u| + |v|.
    """
    _check_same_alphabet(u, v)
    if len(u) == 0 or len(v) == 0:
        raise ValueError("need non-empty words")
    bound = len(u) + len(v)
    pu = _letter_sets(u, u, v, bound)
    pv = _letter_sets(v, u, v, bound)
    for n in range(bound):
        if pu[n].isdisjoint(pv[n]):
            for i in range(n):
                # forced common prefix below the disagreement index
                assert len(pu[i]) == 1 and pu[i] == pv[i]
            return DistinguishedAffix(u.sub(0, n) if n <= len(u) else _forced_prefix(u, v, n))
    raise ValueError("Euclidean pair: no distinguished prefix exists")


def _forced_prefix(u: Word, v: Word, n: int) -> Word:
    # n can exceed |u|; read the forced letters off the u-family state walk
    sets = _letter_sets(u, u, v, n)
    return u.alphabet.word([next(iter(s)) for s in sets])


def distinguished_suffix(u: Word, v: Word) -> DistinguishedAffix:
    """Mirror of distinguished_prefix: reverse, take the prefix, reverse back."""
    aff = distinguished_prefix(u.reverse(), v.reverse())
    return DistinguishedAffix(aff.word.reverse())


@dataclass(frozen=True)
class Building:
    """One parse w = prefix_fragment · blocks · suffix_fragment, where the
    prefix fragment is a proper (possibly empty) suffix of a code word and
    the suffix fragment a proper (possibly empty) prefix of one."""

    prefix_fragment: Word
    blocks: tuple[Word, ...]
    suffix_fragment: Word
    source_of_prefix: int
    source_of_suffix: int

    def concatenation(self) -> Word:
        out = self.prefix_fragment
        for b in self.blocks:
            out = out + b
        return out + self.suffix_fragment


def _normalize_code(code: Iterable[Word]) -> list[Word]:
    ws = sorted(set(code), key=lambda w: (len(w), w.data))
    if not ws:
        raise ValueError("empty code")
    if any(len(w) == 0 for w in ws):
        raise ValueError("code words must be non-empty")
    _check_same_alphabet(*ws)
    return ws


def _parse_graph(w: Word, code: list[Word]):
    """Start/end fragment positions and block edges for parses of w.

    Returns (starts, ends, edges) where starts[i] = smallest source index
    whose proper suffix is w[0,i) (present iff valid), ends likewise for
    proper prefixes w[j,|w|), and edges[i] = list of (j, block_index).
    """
    n = len(w)
    starts: dict[int, int] = {}
    ends: dict[int, int] = {}
    for si, s in enumerate(code):
        for i in range(min(n, len(s) - 1) + 1):
            if i in starts:
                continue
            if i < len(s) and s.data.endswith(w.data[:i]):
                starts[i] = si
        for j in range(max(0, n - len(s) + 1), n + 1):
            if j in ends:
                continue
            if n - j < len(s) and s.data.startswith(w.data[j:]):
                ends[j] = si
    # fix smallest-source bookkeeping (loop above keeps first hit per i)
    edges: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n + 1)}
    for bi, b in enumerate(code):
        for i in occurrences(b, w):
            edges[i].append((i + len(b), bi))
    return starts, ends, edges


def buildings(w: Word, code: Iterable[Word]) -> list[Building]:
    """Every parse of w over the code, canonical convention: fragments are
    proper (possibly empty). Empty list iff w is not built from the code."""
    ws = _normalize_code(code)
    if len(w) == 0:
        return []
    _check_same_alphabet(w, ws[0])
    starts, ends, edges = _parse_graph(w, ws)
    n = len(w)
    # positions from which some valid end is reachable
    reach = [False] * (n + 1)
    for j in ends:
        reach[j] = True
    for i in range(n, -1, -1):
        if not reach[i]:
            reach[i] = any(reach[j] for j, _ in edges[i])
    out: list[Building] = []

    def walk(i: int, acc: list[int]):
        if i in ends:
            out.append(
                Building(
                    prefix_fragment=w.sub(0, start),
                    blocks=tuple(ws[b] for b in acc),
                    suffix_fragment=w.sub(i, n),
                    source_of_prefix=starts[start],
                    source_of_suffix=ends[i],
                )
            )
        for j, bi in edges[i]:
            if reach[j]:
                acc.append(bi)
                walk(j, acc)
                acc.pop()

    for start in sorted(starts):
        if reach[start]:
            walk(start, [])
    return out


def count_buildings(w: Word, code: Iterable[Word], cap: int = 3) -> int:
    """Number of parses of w over the code, saturating at cap."""
    ws = _normalize_code(code)
    if len(w) == 0:
        return 0
    _check_same_alphabet(w, ws[0])
    starts, ends, edges = _parse_graph(w, ws)
    n = len(w)
    ways = [0] * (n + 1)
    for j in ends:
        ways[j] = 1
    for i in range(n, -1, -1):
        acc = ways[i]
        for j, _ in edges[i]:
            acc += ways[j]
        ways[i] = min(acc, cap)
    return min(sum(ways[i] for i in starts), cap)


def is_uniquely_built(w: Word, code: Iterable[Word]) -> bool:
    return count_buildings(w, code, cap=2) == 1


def coincidence_set(words: Sequence[Word]) -> frozenset[int]:
    """Positions where all the (equal-length) words carry the same letter."""
    ws = list(words)
    if not ws:
        raise ValueError("need at least one word")
    _check_same_alphabet(*ws)
    n = len(ws[0])
    if any(len(w) != n for w in ws):
        raise ValueError("words must have equal length")
    first = ws[0].data
    return frozenset(
        i for i in range(n) if all(w.data[i] == first[i] for w in ws)
    )


class BlockCode:
    """Sliding code of odd width 2c+1: table from width-windows to letters.

    The table may be partial; applying it to an unseen window raises.
    """

    def __init__(self, source: Alphabet, target: Alphabet, width: int,
                 table: dict[bytes, int]):
        if width % 2 != 1 or width < 1:
            raise ValueError("width must be odd and positive")
        self.source = source
        self.target = target
        self.width = width
        self.table = dict(table)

    @property
    def halfwidth(self) -> int:
        return self.width // 2

    @classmethod
    def letterwise(cls, alphabet: Alphabet, mapping: dict[int, int],
                   target: Alphabet | None = None) -> "BlockCode":
        target = target or alphabet
        return cls(alphabet, target, 1,
                   {bytes([a]): b for a, b in mapping.items()})

    def apply_to_word(self, w: Word) -> Word:
        """Code every width-window of w; output is shorter by width-1."""
        if w.alphabet != self.source:
            raise ValueError("alphabet mismatch")
        k = self.width
        if len(w) < k:
            raise ValueError("word narrower than the code width")
        out = bytearray()
        for i in range(len(w) - k + 1):
            win = w.data[i:i + k]
            try:
                out.append(self.table[win])
            except KeyError:
                raise ValueError("code table missing window %r" %
                                 (w.sub(i, i + k).display(),)) from None
        return Word(self.target, bytes(out))
