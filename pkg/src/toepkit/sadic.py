"""Morphism towers: directive sequences, their languages, recognizability
radii, and finite point windows with per-position period certificates.

Level convention used throughout: `level_word(n, a)` is the image of the
level-n letter under the composite of the bottom n morphisms, i.e.
tau_0 o ... o tau_{n-1} applied to a in A_n.  A DirectiveSequence with N
listed morphisms has level words for n = 1..N (more with a tail rule).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .words import (
    Alphabet,
    BlockCode,
    Word,
    common_prefix_length,
    occurrences,
)


@dataclass(frozen=True)
class Morphism:
    """Non-erasing morphism source* -> target*, one image per source letter."""

    source: Alphabet
    target: Alphabet
    images: tuple[Word, ...]

    def __post_init__(self):
        if len(self.images) != len(self.source):
            raise ValueError("need exactly one image per source letter")
        for im in self.images:
            if len(im) == 0:
                raise ValueError("erasing morphisms are not supported")
            if im.alphabet != self.target:
                raise ValueError("image over the wrong alphabet")

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def image(self, letter: int | str) -> Word:
        if isinstance(letter, str):
            letter = self.source.index(letter)
        return self.images[letter]


def apply(m: Morphism, w: Word) -> Word:
    """Concatenate the images of the letters of w."""
    if w.alphabet != m.source:
        raise ValueError("alphabet mismatch")
    return Word(m.target, b"".join(m.images[a].data for a in w.data))


def compose(outer: Morphism, inner: Morphism) -> Morphism:
    if inner.target != outer.source:
        raise ValueError("morphisms do not chain")
    return Morphism(inner.source, outer.target,
                    tuple(apply(outer, im) for im in inner.images))


@dataclass(frozen=True)
class MorphismFlags:
    constant_length: Optional[int]
    proper: bool
    coincidences: frozenset[int]


def structural_flags(m: Morphism) -> MorphismFlags:
    """Constant-length / proper flags and the coincidence positions
    (positions where all images carry the same letter; only meaningful
    for constant-length morphisms)."""
    lengths = {len(im) for im in m.images}
    cl = lengths.pop() if len(lengths) == 1 else None
    proper = (len({im.data[0] for im in m.images}) == 1
              and len({im.data[-1] for im in m.images}) == 1)
    coinc = frozenset()
    if cl is not None:
        first = m.images[0].data
        coinc = frozenset(i for i in range(cl)
                          if all(im.data[i] == first[i] for im in m.images))
    return MorphismFlags(cl, proper, coinc)


class DirectiveSequence:
    """Tower of morphisms tau_0..tau_{N-1} with chained alphabets.

    An optional tail rule extends the tower deterministically beyond the
    listed levels; without one, operations past the listed depth raise.
    Composite morphisms are memoized behind a lock so concurrent readers
    never observe partial entries.
    """

    def __init__(self, levels: Sequence[Morphism],
                 tail_rule: Optional[Callable[[int], Morphism]] = None):
        levels = tuple(levels)
        if not levels:
            raise ValueError("need at least one morphism")
        for lo, hi in zip(levels, levels[1:]):
            if hi.target != lo.source:
                raise ValueError("levels do not chain")
        self.levels = levels
        self.tail_rule = tail_rule
        self._tail_cache: dict[int, Morphism] = {}
        self._compose_cache: dict[tuple[int, int], Morphism] = {}
        self._lock = threading.Lock()

    @property
    def listed_depth(self) -> int:
        return len(self.levels)

    @property
    def has_tail(self) -> bool:
        return self.tail_rule is not None

    def check_depth(self, depth: int):
        if depth > self.listed_depth and not self.has_tail:
            raise ValueError(
                "depth %d exceeds the %d listed levels and there is no tail rule"
                % (depth, self.listed_depth))

    def morphism(self, n: int) -> Morphism:
        if n < 0:
            raise ValueError("negative level")
        if n < len(self.levels):
            return self.levels[n]
        if self.tail_rule is None:
            raise ValueError("level %d not available (depth %d, no tail rule)"
                             % (n, self.listed_depth))
        with self._lock:
            got = self._tail_cache.get(n)
        if got is None:
            got = self.tail_rule(n)
            prev = self.morphism(n - 1) if n else None
            if prev is not None and got.target != prev.source:
                raise ValueError("tail rule produced a non-chaining morphism")
            with self._lock:
                self._tail_cache[n] = got
        return got

    def alphabet(self, n: int) -> Alphabet:
        if n == 0:
            return self.levels[0].target
        return self.morphism(n - 1).source

    def compose_range(self, n: int, N: int) -> Morphism:
        """The composite tau_n o tau_{n+1} o ... o tau_{N-1}."""
        if not 0 <= n < N:
            raise ValueError("need 0 <= n < N")
        key = (n, N)
        with self._lock:
            got = self._compose_cache.get(key)
        if got is not None:
            return got
        if N == n + 1:
            got = self.morphism(n)
        else:
            got = compose(self.compose_range(n, N - 1), self.morphism(N - 1))
        with self._lock:
            self._compose_cache[key] = got
        return got

    def level_word(self, n: int, letter: int | str) -> Word:
        return self.compose_range(0, n).image(letter)

    def level_words(self, n: int) -> tuple[Word, ...]:
        return self.compose_range(0, n).images

    def level_lengths(self, n: int) -> tuple[int, ...]:
        """Lengths of the level-n words, computed without materializing them."""
        lens = tuple(len(im) for im in self.levels[0].images)
        for k in range(1, n):
            m = self.morphism(k)
            lens = tuple(sum(lens[b] for b in im.data) for im in m.images)
        return lens

    def alignment_modulus(self, n: int) -> int:
        """gcd of the level-n word lengths: blocks of a building at level n
        start on a grid of this modulus."""
        return math.gcd(*self.level_lengths(n))


def contract(d: DirectiveSequence, cut_levels: Sequence[int]) -> DirectiveSequence:
    """Telescope: new level k is the composite over [n_k, n_{k+1})."""
    cuts = list(cut_levels)
    if len(cuts) < 2 or cuts[0] != 0 or any(a >= b for a, b in zip(cuts, cuts[1:])):
        raise ValueError("cut levels must be strictly increasing and start at 0")
    d.check_depth(cuts[-1])
    return DirectiveSequence(
        [d.compose_range(a, b) for a, b in zip(cuts, cuts[1:])])


def scale_divisors(d: DirectiveSequence, depth: int) -> list[int]:
    """d_n = gcd of the level-(n+1) word lengths, for n = 0..depth-1."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    d.check_depth(depth)
    out = []
    lens = tuple(len(im) for im in d.levels[0].images)
    out.append(math.gcd(*lens))
    for k in range(1, depth):
        m = d.morphism(k)
        lens = tuple(sum(lens[b] for b in im.data) for im in m.images)
        out.append(math.gcd(*lens))
    return out


def is_primitive_window(d: DirectiveSequence, n: int, max_n: int) -> Optional[int]:
    """Least N <= max_n such that every A_n letter occurs in every image of
    the composite over [n, N); None if no such N within the bound."""
    if n >= max_n:
        raise ValueError("need n < max_n")
    full = frozenset(range(len(d.alphabet(n))))
    occ: Optional[dict[int, frozenset[int]]] = None
    for N in range(n + 1, max_n + 1):
        m = d.morphism(N - 1)
        if occ is None:
            occ = {a: frozenset(m.images[a].data) for a in range(len(m.source))}
        else:
            prev = occ
            occ = {a: frozenset().union(*(prev[b] for b in m.images[a].data))
                   for a in range(len(m.source))}
        if all(s == full for s in occ.values()):
            return N
    return None


def language(d: DirectiveSequence, length: int, depth: int) -> set[Word]:
    """All length-`length` subwords of the level-`depth` words.

    This is exactly the subshift's language at that length once the level
    words are long enough and primitivity has kicked in (see
    language_is_exact); otherwise it is a lower approximation.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    d.check_depth(depth)
    ws = d.level_words(depth)
    if length > max(len(w) for w in ws):
        raise ValueError("length %d exceeds every level-%d word" % (length, depth))
    alph = d.alphabet(0)
    seen = set()
    for w in ws:
        data = w.data
        for i in range(len(data) - length + 1):
            seen.add(data[i:i + length])
    return {Word(alph, b) for b in seen}


def language_is_exact(d: DirectiveSequence, length: int, depth: int) -> bool:
    """Soundness condition for `language` being the full language."""
    if min(d.level_lengths(depth)) < 2 * length:
        return False
    try:
        return is_primitive_window(d, 0, depth) is not None
    except ValueError:
        return False


@dataclass(frozen=True)
class RecognizabilityCertificate:
    """Every word of the verified length in the (depth-limited) language
    pins down the block letter and offset covering its center."""

    level: int
    radius: int
    verified_word_length: int


def _center_assignments(w: Word, blocks: Sequence[Word],
                        letter_of_block: dict[bytes, tuple[int, ...]]) -> set:
    """All (letter, offset) pairs a parse of w can place over the center
    position len(w)//2."""
    n = len(w)
    center = n // 2
    starts = {}
    for i in range(min(n, max(len(b) for b in blocks) - 1) + 1):
        srcs = tuple(bi for bi, b in enumerate(blocks)
                     if i < len(b) and b.data.endswith(w.data[:i]))
        if srcs:
            starts[i] = srcs
    ends = {}
    for j in range(n, max(-1, n - max(len(b) for b in blocks)), -1):
        srcs = tuple(bi for bi, b in enumerate(blocks)
                     if n - j < len(b) and b.data.startswith(w.data[j:]))
        if srcs:
            ends[j] = srcs
    edges: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n + 1)}
    for bi, b in enumerate(blocks):
        for i in occurrences(b, w):
            edges[i].append((i + len(b), bi))
    # forward: reachable from a valid start fragment
    fwd = [False] * (n + 1)
    for i in starts:
        fwd[i] = True
    for i in range(n + 1):
        if fwd[i]:
            for j, _ in edges[i]:
                fwd[j] = True
    # backward: can reach a valid end fragment
    bwd = [False] * (n + 1)
    for j in ends:
        bwd[j] = True
    for i in range(n, -1, -1):
        if not bwd[i]:
            bwd[i] = any(bwd[j] for j, _ in edges[i])
    if not any(fwd[i] and bwd[i] for i in range(n + 1)):
        return set()

    out = set()
    for i in range(n + 1):
        if not fwd[i]:
            continue
        for j, bi in edges[i]:
            if bwd[j] and i <= center < j:
                for letter in letter_of_block[blocks[bi].data]:
                    out.add((letter, center - i))
    for i, srcs in starts.items():
        if center < i and bwd[i]:
            for bi in srcs:
                for letter in letter_of_block[blocks[bi].data]:
                    out.add((letter, len(blocks[bi]) - i + center))
    for j, srcs in ends.items():
        if center >= j and fwd[j]:
            for bi in srcs:
                for letter in letter_of_block[blocks[bi].data]:
                    out.add((letter, center - j))
    return out


def recognizability_radius(d: DirectiveSequence, level: int, depth: int,
                           bound: Optional[int] = None
                           ) -> Optional[RecognizabilityCertificate]:
    """Least r <= bound such that every word of length 2r in the
    depth-limited language admits exactly one (letter, offset) assignment
    over its center, for buildings from the level words.

    One-sided: a certificate is verified against language(2r, depth) only.
    Returns None when no radius up to the bound certifies.
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    d.check_depth(depth)
    blocks = d.level_words(level)
    letter_of_block: dict[bytes, tuple[int, ...]] = {}
    for letter, b in enumerate(blocks):
        letter_of_block.setdefault(b.data, ())
        letter_of_block[b.data] += (letter,)
    if any(len(v) > 1 for v in letter_of_block.values()):
        return None  # two letters share an image: never recognizable
    uniq_blocks = [Word(d.alphabet(0), data) for data in letter_of_block]
    if bound is None:
        bound = 4 * max(len(b) for b in blocks)
    deep = d.level_words(depth)
    max_len = max(len(w) for w in deep)
    for r in range(1, bound + 1):
        if 2 * r > max_len:
            return None
        seen = set()
        ok = True
        for w in deep:
            data = w.data
            for i in range(len(data) - 2 * r + 1):
                piece = data[i:i + 2 * r]
                if piece in seen:
                    continue
                seen.add(piece)
                assign = _center_assignments(
                    Word(d.alphabet(0), piece), uniq_blocks, letter_of_block)
                if len(assign) != 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return RecognizabilityCertificate(level, r, 2 * r)
    return None


# --------------------------------------------------------------------------
# point windows and period certificates


@dataclass(frozen=True)
class LevelAlignment:
    """Blocks of the level-n building start at positions ≡ phase (mod
    modulus); `words` are all level-n words."""

    modulus: int
    phase: int
    words: tuple[bytes, ...]


class TowerCerts:
    """Period certificates forced by a generating tower.

    Position i is confirmed q-periodic when, for some level with q dividing
    its alignment modulus, the letters at all block offsets congruent to
    i's (mod q) agree across all that level's words.
    """

    def __init__(self, alignments: Sequence[LevelAlignment]):
        self.alignments = tuple(alignments)
        self._cache: dict[tuple[int, int, int], bool] = {}

    def candidates(self) -> list[int]:
        qs = set()
        for al in self.alignments:
            qs.update(_divisors(al.modulus))
        return sorted(q for q in qs if q > 1)

    def confirmed(self, i: int, q: int) -> bool:
        if q < 1:
            return False
        for li, al in enumerate(self.alignments):
            if al.modulus % q:
                continue
            res = (i - al.phase) % q
            key = (li, q, res)
            got = self._cache.get(key)
            if got is None:
                letters = set()
                for wdata in al.words:
                    letters.update(wdata[res::q])
                got = len(letters) == 1
                self._cache[key] = got
            if got:
                return True
        return False


class NullCerts:
    def candidates(self):
        return []

    def confirmed(self, i, q):
        return False


class ExplicitCerts:
    """Per-position confirmed periods, closed upward under divisibility."""

    def __init__(self, confirmed: dict[int, Iterable[int]]):
        self.map = {i: frozenset(v) for i, v in confirmed.items()}

    def candidates(self):
        out = set()
        for v in self.map.values():
            out.update(v)
        return sorted(out)

    def confirmed(self, i, q):
        return any(q % c == 0 for c in self.map.get(i, ()))


class CodedCerts:
    """Certificates transported through a sliding code of halfwidth c:
    a coded position is confirmed iff its whole source neighborhood is."""

    def __init__(self, source: "PointWindow", halfwidth: int):
        self.source = source
        self.halfwidth = halfwidth

    def candidates(self):
        return self.source.certs.candidates()

    def confirmed(self, i, q):
        lo, hi = i - self.halfwidth, i + self.halfwidth
        if lo < self.source.start or hi >= self.source.end:
            return False
        return all(self.source.confirmed(j, q) for j in range(lo, hi + 1))


def _divisors(n: int) -> list[int]:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


class PointWindow:
    """Finite window x[a, b) of a point with a <= 0 < b, carrying one-sided
    period certificates (confirmed vs unknown) plus letter-level refutation."""

    def __init__(self, alphabet: Alphabet, start: int, data: bytes, certs=None):
        if not data:
            raise ValueError("empty window")
        if not (start <= 0 < start + len(data)):
            raise ValueError("window must cover position 0")
        self.alphabet = alphabet
        self.start = start
        self.data = data
        self.certs = certs if certs is not None else NullCerts()

    @property
    def end(self) -> int:
        return self.start + len(self.data)

    def __len__(self):
        return len(self.data)

    def letter(self, i: int) -> int:
        if not self.start <= i < self.end:
            raise IndexError("position %d outside window [%d,%d)"
                             % (i, self.start, self.end))
        return self.data[i - self.start]

    def word(self, i: int, j: int) -> Word:
        if not (self.start <= i <= j <= self.end):
            raise IndexError("range [%d,%d) outside window" % (i, j))
        return Word(self.alphabet, self.data[i - self.start:j - self.start])

    def whole(self) -> Word:
        return Word(self.alphabet, self.data)

    def confirmed(self, i: int, q: int) -> bool:
        return self.certs.confirmed(i, q)

    def interval_confirmed(self, a: int, b: int, q: int) -> bool:
        return all(self.confirmed(i, q) for i in range(a, b))

    def refutation(self, i: int, q: int) -> Optional[tuple[int, int]]:
        """Two in-window positions ≡ i (mod q) carrying different letters,
        or None.  Such a pair shows no position of that residue class is
        q-periodic."""
        res = (i - self.start) % q
        seen = {}
        for j in range(res, len(self.data), q):
            a = self.data[j]
            for b, pos in seen.items():
                if b != a:
                    return (pos + self.start, j + self.start)
            seen.setdefault(a, j)
        return None

    def least_confirmed(self, i: int) -> Optional[int]:
        for q in self.certs.candidates():
            if self.confirmed(i, q):
                return q
        return None


def tower_alignments(d: DirectiveSequence, depth: int, origin_offset: int
                     ) -> list[LevelAlignment]:
    out = []
    for n in range(1, depth + 1):
        modulus = d.alignment_modulus(n)
        out.append(LevelAlignment(
            modulus=modulus,
            phase=(-origin_offset) % modulus,
            words=tuple(w.data for w in d.level_words(n))))
    return out


def deep_anchor(d: DirectiveSequence, depth: int, letter: int | str,
                origin_offset: int) -> list[tuple[int, int]]:
    """Per-level (letter, offset) tower for the point whose level-`depth`
    word contains the origin at `origin_offset`."""
    if isinstance(letter, str):
        letter = d.alphabet(depth).index(letter)
    path = []
    cur_letter, cur_off = letter, origin_offset
    for n in range(depth, 0, -1):
        if n == 1:
            path.append((cur_letter, cur_off))
            break
        m = d.morphism(n - 1)
        img = m.images[cur_letter]
        lens = d.level_lengths(n - 1)
        s = 0
        for b in img.data:
            if cur_off < s + lens[b]:
                path.append((cur_letter, s))
                cur_letter, cur_off = b, cur_off - s
                break
            s += lens[b]
        else:
            raise ValueError("origin offset outside the level word")
    path.reverse()
    return path


def point_window(d: DirectiveSequence, anchor: Sequence[tuple[int | str, int]],
                 half_width: Optional[int] = None) -> PointWindow:
    """Window of the point pinned by a per-level (letter, offset) tower.

    anchor[n-1] = (a_n, o_n): for n >= 2, the level-(n-1) word occurs at
    position o_n inside the level-n word of a_n; o_1 is the origin offset
    inside the level-1 word.  Raises on inconsistent anchors.
    """
    depth = len(anchor)
    if depth < 1:
        raise ValueError("empty anchor")
    d.check_depth(depth)
    letters = []
    for n, (a, o) in enumerate(anchor, start=1):
        if isinstance(a, str):
            a = d.alphabet(n).index(a)
        letters.append((a, o))
    # consistency: each level's word contains the previous level's at o_n
    k = letters[0][1]
    w1 = d.level_word(1, letters[0][0])
    if not 0 <= k < len(w1):
        raise ValueError("inconsistent anchor: origin offset outside level-1 word")
    prev = w1
    for n in range(2, depth + 1):
        a, o = letters[n - 1]
        wn = d.level_word(n, a)
        if o < 0 or o + len(prev) > len(wn) or wn.data[o:o + len(prev)] != prev.data:
            raise ValueError("inconsistent anchor at level %d" % n)
        k += o
        prev = wn
    deepest = prev
    start, stop = -k, len(deepest) - k
    if half_width is not None:
        if half_width < 1 or half_width > len(deepest):
            raise ValueError("half width must be within the deepest level word")
        start, stop = max(start, -half_width), min(stop, half_width)
    certs = TowerCerts(tower_alignments(d, depth, k))
    lo = start + k
    return PointWindow(d.alphabet(0), start, deepest.data[lo:stop + k], certs)


def canonical_window(d: DirectiveSequence, depth: int,
                     half_width: Optional[int] = None,
                     letter: int = 0) -> PointWindow:
    """Two-sided window anchored mid-word, with the origin on the block
    grid of every level below `depth`."""
    d.check_depth(depth)
    length = d.level_lengths(depth)[letter]
    grid = d.alignment_modulus(depth - 1) if depth > 1 else 1
    offset = (length // 2 // grid) * grid
    return point_window(d, deep_anchor(d, depth, letter, offset), half_width)


def centered_asymptotic_pair(d: DirectiveSequence, depth: int
                             ) -> tuple[PointWindow, PointWindow]:
    """The unique centered left asymptotic pair of a two-letter
    constant-length proper tower, truncated at `depth`: both windows are
    level-`depth` words placed so the maximal common prefix ends at 0."""
    d.check_depth(depth)
    for n in range(depth):
        flags = structural_flags(d.morphism(n))
        if flags.constant_length is None:
            raise ValueError("level %d is not constant length" % n)
        if n >= 1 and not flags.proper:
            raise ValueError("level %d is not proper" % n)
    for n in range(1, depth + 1):
        if len(d.alphabet(n)) != 2:
            raise ValueError("alphabet at level %d is not two letters" % n)
    w1, w2 = d.level_words(depth)
    k = common_prefix_length(w1, w2)
    if k == len(w1):
        raise ValueError("level-%d words coincide (periodic tower?)" % depth)
    certs = TowerCerts(tower_alignments(d, depth, k))
    a = PointWindow(d.alphabet(0), -k, w1.data, certs)
    b = PointWindow(d.alphabet(0), -k, w2.data,
                    TowerCerts(tower_alignments(d, depth, k)))
    return a, b


def apply_block_code(x: PointWindow, code: BlockCode) -> PointWindow:
    """Slide the code over the window; the result loses `halfwidth`
    positions at each end and inherits certificates positionwise (a coded
    position is confirmed q-periodic iff its whole source neighborhood is)."""
    if x.alphabet != code.source:
        raise ValueError("alphabet mismatch")
    if len(x) < code.width:
        raise ValueError("window too narrow for the code width")
    out = code.apply_to_word(x.whole())
    c = code.halfwidth
    return PointWindow(code.target, x.start + c, out.data, CodedCerts(x, c))


# --------------------------------------------------------------------------
# directive-sequence text format


def serialize_directive(d: DirectiveSequence, depth: Optional[int] = None) -> str:
    """Canonical text form (byte-identical round trip)."""
    depth = d.listed_depth if depth is None else depth
    d.check_depth(depth)
    lines = []
    a0 = d.alphabet(0)
    lines.append("alphabet 0: %s" % " ".join(a0.names))
    for n in range(depth):
        m = d.morphism(n)
        lines.append("alphabet %d: %s" % (n + 1, " ".join(m.source.names)))
        for li, name in enumerate(m.source.names):
            img = " ".join(m.target.names[b] for b in m.images[li].data)
            lines.append("map %d %s: %s" % (n, name, img))
    return "\n".join(lines) + "\n"


def parse_directive(text: str) -> DirectiveSequence:
    """Parse the line-oriented format; `#` starts a comment."""
    alphabets: dict[int, Alphabet] = {}
    maps: dict[int, dict[str, list[str]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, rest = line.split(":", 1)
            fields = head.split()
            if fields[0] == "alphabet":
                level = int(fields[1])
                names = rest.split()
                if not names:
                    raise ValueError("empty alphabet")
                alphabets[level] = Alphabet(names)
            elif fields[0] == "map":
                level, letter = int(fields[1]), fields[2]
                maps.setdefault(level, {})[letter] = rest.split()
            else:
                raise ValueError("unknown directive %r" % fields[0])
        except (IndexError, ValueError) as exc:
            raise ValueError("line %d: %s" % (lineno, exc)) from None
    if 0 not in alphabets:
        raise ValueError("missing alphabet 0")
    n_levels = max(maps) + 1 if maps else 0
    if n_levels == 0:
        raise ValueError("no map lines")
    levels = []
    for n in range(n_levels):
        if n not in maps:
            raise ValueError("missing maps for level %d" % n)
        if n + 1 not in alphabets:
            raise ValueError("missing alphabet %d" % (n + 1))
        src, tgt = alphabets[n + 1], alphabets[n]
        images = []
        for name in src.names:
            if name not in maps[n]:
                raise ValueError("level %d: missing image of %r" % (n, name))
            images.append(tgt.word(maps[n][name]))
        levels.append(Morphism(src, tgt, tuple(images)))
    return DirectiveSequence(levels)
