"""Generators for the explicit tower constructions, their claim checkers,
and the small stationary fixtures used throughout the test-suite and CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .words import Alphabet, BlockCode, Word, common_prefix_length
from .sadic import (
    DirectiveSequence,
    Morphism,
    PointWindow,
    deep_anchor,
    point_window,
    scale_divisors,
    structural_flags,
)

BIN = Alphabet("01")
TWO = Alphabet("12")


# --------------------------------------------------------------- fixtures

def p4() -> DirectiveSequence:
    """Two-letter constant-length-4 stationary tower over {0,1}; level-1
    words are 0010 and 0110."""
    bottom = Morphism(TWO, BIN, (BIN.parse("0"), BIN.parse("1")))
    sigma = Morphism(TWO, TWO, (TWO.parse("1121"), TWO.parse("1221")))
    return DirectiveSequence([bottom, sigma], tail_rule=lambda n: sigma)


def period_doubling() -> DirectiveSequence:
    """Stationary tower of 0 -> 01, 1 -> 00 over {0,1}."""
    tau = Morphism(BIN, BIN, (BIN.parse("01"), BIN.parse("00")))
    return DirectiveSequence([tau], tail_rule=lambda n: tau)


def three_adic() -> DirectiveSequence:
    """Two-letter constant-length-3 stationary tower (scale 3^infinity)."""
    bottom = Morphism(TWO, BIN, (BIN.parse("0"), BIN.parse("1")))
    sigma = Morphism(TWO, TWO, (TWO.parse("112"), TWO.parse("122")))
    return DirectiveSequence([bottom, sigma], tail_rule=lambda n: sigma)


# ------------------------------------------------- rank-2 counterexample

def _cex_floor(n: int) -> int:
    # smallest m making every filler length non-negative
    return 5 if n == 0 else 7


def default_m(n: int) -> int:
    return 2 * _cex_floor(n)


@dataclass(frozen=True)
class CounterexampleParams:
    """Block-count schedule for the rank-2 counterexample tower."""

    depth: int
    m_schedule: tuple[int, ...] = ()

    def m(self, n: int) -> int:
        if n < len(self.m_schedule):
            return self.m_schedule[n]
        return default_m(n)

    def validate(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        for n, m in enumerate(self.m_schedule):
            if m < _cex_floor(n):
                raise ValueError(
                    "m_%d = %d is below the admissibility floor %d"
                    % (n, m, _cex_floor(n)))


def _cex_level_morphism(m: int, len1: int, len2: int) -> Morphism:
    """Level recursion: the next pair of words in terms of the current one.

    Next word 1 = w1^2 (w1 w2)^4 A w1^2 B w1^2 and next word 2 =
    (w1 w2)^2 C w1^2 D w2^2 E w1^2 F w1^2, where the fillers A..F are
    square-block padding (w1^2 powers) realizing the target lengths.
    """
    d = _gcd(len1, len2)
    unit = 2 * len1  # filler atom: one w1^2 block

    def pad(target_len):
        if target_len < 0 or target_len % unit:
            raise ValueError("filler of length %d not realizable" % target_len)
        return [0, 0] * (target_len // unit)

    base = 2 * m * d
    img1 = ([0, 0] + [0, 1] * 4 + pad(base - 6 * len1 - 4 * len2)
            + [0, 0] + pad(base - 4 * len1) + [0, 0])
    img2 = ([0, 1] * 2 + pad(base - 2 * len1 - 2 * len2) + [0, 0]
            + pad(base - 2 * len1) + [1, 1] + pad(base - 2 * len2)
            + [0, 0] + pad(base - 4 * len1) + [0, 0])
    return Morphism(TWO, TWO, (TWO.word(img1), TWO.word(img2)))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def gen_counterexample(params: CounterexampleParams) -> DirectiveSequence:
    """The rank-2 tower whose level words obey the doubling recursion
    |w_{n+1,1}| = 4 m_n d_n, |w_{n+1,2}| = 8 m_n d_n with seeds 0 and 1.

    Lists depth+1 morphisms (so the level-`depth` word pair is available)
    and carries a tail rule continuing the schedule with defaults.
    """
    params.validate()
    bottom = Morphism(TWO, BIN, (BIN.parse("0"), BIN.parse("1")))
    levels = [bottom]
    len1 = len2 = 1
    for n in range(params.depth):
        m = params.m(n)
        levels.append(_cex_level_morphism(m, len1, len2))
        d = _gcd(len1, len2)
        len1, len2 = 4 * m * d, 8 * m * d

    def tail(k):
        # k >= 1 indexes the recursion step k-1
        l1 = l2 = 1
        for n in range(k - 1):
            d = _gcd(l1, l2)
            mm = params.m(n)
            l1, l2 = 4 * mm * d, 8 * mm * d
        return _cex_level_morphism(params.m(k - 1), l1, l2)

    return DirectiveSequence(levels, tail_rule=tail)


@dataclass(frozen=True)
class AperiodicityWitness:
    """Two positions in the same residue class mod `period` carrying
    different letters: nothing in that class is `period`-periodic."""

    position: int
    period: int
    other_position: int
    letters: tuple[int, int]
    note: str = ""

    def check(self):
        if (self.position - self.other_position) % self.period:
            raise ValueError("witness positions not congruent")
        if self.letters[0] == self.letters[1]:
            raise ValueError("witness letters agree")


@dataclass
class CounterexampleReport:
    depth: int
    d_values: list[int]
    q_values: list[int]
    m_values: list[int]
    prefix_inequality_levels: list[int] = field(default_factory=list)
    witnesses_left: list[AperiodicityWitness] = field(default_factory=list)
    witnesses_right: list[AperiodicityWitness] = field(default_factory=list)
    anchor_periods_checked: list[int] = field(default_factory=list)

    def lines(self):
        out = ["counterexample claims at depth %d" % self.depth]
        out.append("  scale divisors: %s" % " ".join(map(str, self.d_values)))
        out.append("  common prefixes q_n: %s" % " ".join(map(str, self.q_values)))
        out.append("  [claim:length-recursion] d_n = |w_n1| for n >= 1: ok")
        out.append("  [claim:prefix-letter-inequality] levels %s: ok"
                   % ",".join(map(str, self.prefix_inequality_levels)))
        for w in self.witnesses_left:
            out.append("  [claim:aperiodic-at--1] left point, period %d:"
                       " positions %d,%d letters %s ok%s"
                       % (w.period, w.position, w.other_position,
                          "%d!=%d" % w.letters,
                          " (%s)" % w.note if w.note else ""))
        for w in self.witnesses_right:
            out.append("  [claim:aperiodic-at--1] right point, period %d:"
                       " positions %d,%d ok" % (w.period, w.position,
                                                w.other_position))
        out.append("  [claim:toeplitz-anchor] periods %s confirmed"
                   % ",".join(map(str, self.anchor_periods_checked)))
        return out


class ClaimFailure(AssertionError):
    pass


def check_counterexample_claims(d: DirectiveSequence, depth: int
                                ) -> CounterexampleReport:
    """Verify the counterexample's combinatorial claims at every level up
    to `depth`; raises ClaimFailure on any miss."""
    divisors = scale_divisors(d, depth + 1)
    m_values = []
    for n in range(depth):
        num = divisors[n + 1]
        if num % (4 * divisors[n]):
            raise ClaimFailure("divisor recursion broken at level %d" % n)
        m_values.append(num // (4 * divisors[n]))
    q = [0]
    for n in range(depth):
        q.append(q[-1] + divisors[n])
    report = CounterexampleReport(depth, divisors[:depth + 1], q, m_values)

    words = {n: d.level_words(n + 1) for n in range(depth + 1)}
    for n in range(depth + 1):
        w1, w2 = words[n]
        if common_prefix_length(w1, w2) != q[n]:
            raise ClaimFailure("common prefix at level %d is not q_n" % n)
        if n >= 1:
            if len(w1) != divisors[n] or len(w2) != 2 * divisors[n]:
                raise ClaimFailure("length pattern broken at level %d" % n)

    for n in range(1, depth + 1):
        w1, w2 = words[n]
        if w1[q[n] - 1] == w2[divisors[n] + q[n] - 1]:
            raise ClaimFailure("prefix-letter inequality fails at level %d" % n)
        report.prefix_inequality_levels.append(n)

    # centered left asymptotic pair anchored so the common prefix ends at 0
    anchor_left = [(0, 0)] + [(0, divisors[k - 2]) for k in range(2, depth + 2)]
    anchor_right = [(1, 0)] + [(1, divisors[k - 2]) for k in range(2, depth + 2)]
    y = point_window(d, anchor_left)
    yt = point_window(d, anchor_right)

    for n in range(1, depth + 1):
        dn, qn = divisors[n], q[n]
        left_letter = y.letter(-1)
        if left_letter != words[n][0][qn - 1]:
            raise ClaimFailure("left point letter at -1 mismatch at level %d" % n)
        other = 3 * dn - 1
        expect = words[n][1][dn + qn - 1]
        if other < y.end:
            got = y.letter(other)
            note = "in window"
            if got != expect:
                raise ClaimFailure("level-%d building letter mismatch" % n)
        else:
            got = expect
            note = "via next-level block layout"
        wit = AperiodicityWitness(-1, dn, other, (left_letter, got), note)
        wit.check()
        report.witnesses_left.append(wit)

        right_letter = yt.letter(-1)
        r_other = dn - 1
        r_got = yt.letter(r_other)
        r_wit = AperiodicityWitness(-1, dn, r_other, (right_letter, r_got))
        r_wit.check()
        report.witnesses_right.append(r_wit)

    # Toeplitz point: level-n word anchored at -(sum of 2 m_k d_k below n)
    offs = [0]
    for n in range(depth):
        offs.append(offs[-1] + 2 * m_values[n] * divisors[n])
    anchor_x = [(0, 0)] + [(0, offs[k - 1] - offs[k - 2])
                           for k in range(2, depth + 2)]
    x = point_window(d, anchor_x)
    for n in range(depth):
        period = divisors[n + 1]
        lo = -offs[n]
        hi = lo + (divisors[n] if n >= 1 else 1)
        if not x.interval_confirmed(lo, hi, period):
            raise ClaimFailure("anchor interval not confirmed %d-periodic"
                               % period)
        report.anchor_periods_checked.append(period)
    return report


# ------------------------------------------------------------ flip example

_FLIP_U = [(0, 0), (0, 1), (0, 0), (1, 1), (1, 0), (0, 1),
           (1, 0), (1, 1), (0, 0), (0, 1), (0, 0)]
_FLIP_V = [(0, 0), (0, 1), (0, 0), (1, 1), (1, 0), (0, 1),
           (1, 0), (1, 1), (1, 0), (0, 1), (0, 0)]
# items are (base u/v, flipped?)


def _flip_items(items):
    return [(b, 1 - f) for b, f in items]


def _pair_letters(items):
    """Group a plain/flipped item stream into the four two-item words."""
    assert len(items) % 2 == 0
    out = []
    for (b1, f1), (b2, f2) in zip(items[::2], items[1::2]):
        assert (f1, f2) == (0, 1), "stream lost plain/flip alternation"
        out.append({(0, 0): 0, (0, 1): 1, (1, 0): 2, (1, 1): 3}[(b1, b2)])
    return out


@dataclass(frozen=True)
class FlipExample:
    directive: DirectiveSequence
    flip: BlockCode  # letterwise 0 <-> 1


def gen_flip_example(depth: int) -> FlipExample:
    """Four-letter constant-length tower over {0,1} with the letterwise
    flip as an automorphism; seeds u=0001, v=0111, level words u~u, u~v,
    v~u, v~v."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    four = Alphabet("1234")
    u0, v0 = BIN.parse("0001"), BIN.parse("0111")
    flip_tbl = BlockCode.letterwise(BIN, {0: 1, 1: 0})

    def fl(w):
        return flip_tbl.apply_to_word(w)

    images0 = (u0 + fl(u0), u0 + fl(v0), v0 + fl(u0), v0 + fl(v0))
    bottom = Morphism(four, BIN, images0)
    streams = {
        0: _FLIP_U + _flip_items(_FLIP_U),
        1: _FLIP_U + _flip_items(_FLIP_V),
        2: _FLIP_V + _flip_items(_FLIP_U),
        3: _FLIP_V + _flip_items(_FLIP_V),
    }
    sigma = Morphism(four, four,
                     tuple(four.word(_pair_letters(streams[j])) for j in range(4)))
    levels = [bottom] + [sigma] * depth
    d = DirectiveSequence(levels, tail_rule=lambda n: sigma)
    return FlipExample(d, flip_tbl)


# -------------------------------------------------- cyclic automorphism

@dataclass(frozen=True)
class AutExampleParams:
    """Order of the cyclic symmetry and the seed-word block parameter."""

    n: int
    depth: int
    m: Optional[int] = None

    @property
    def floor(self) -> int:
        return 8 + 2 * self.n ** (2 * self.n)

    def resolved_m(self) -> int:
        m = self.floor if self.m is None else self.m
        if m < self.floor:
            raise ValueError("m = %d below the admissibility floor %d"
                             % (m, self.floor))
        if (m - self.floor) % 2:
            raise ValueError("m must have the parity of the floor %d"
                             % self.floor)
        return m

    def validate(self):
        if self.n < 2:
            raise ValueError("order must be >= 2")
        if self.n ** self.n > 255:
            raise ValueError("order %d needs alphabets beyond the supported size"
                             % self.n)
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        self.resolved_m()


def _aut_alpha0(n: int) -> tuple[int, ...]:
    # first letter 0 and last letter 1 cap the constant runs on both sides
    if n == 2:
        return (0, 1)
    if n == 3:
        return (0, 1, 1)
    return (0, 1) + (0,) * (n - 4) + (0, 1)


def _aut_seed_words(n: int, m: int) -> list[tuple[int, ...]]:
    """The n seed words alpha0 gamma0 t^{6n+1} alpha0, with gamma0 running
    through every length-2n pair once (framed by alpha0, padded to length)."""
    alpha0 = _aut_alpha0(n)
    all_blocks = [tuple(divmod_digits(k, n)) for k in range(n ** n)]
    pairs = [(a, b) for a in all_blocks for b in all_blocks]
    first = (alpha0, alpha0)
    last = (all_blocks[-1], alpha0)
    middle = [p for p in pairs if p not in (first, last)]
    pad = (m - (8 + 2 * n ** (2 * n))) // 2
    seq = [first] + middle + [first] * pad + [last]
    gamma0 = tuple(x for a, b in seq for x in a + b)
    out = []
    for t in range(n):
        out.append(alpha0 + gamma0 + (t,) * (6 * n + 1) + alpha0)
    for u in out:
        assert len(u) == m * n + 1
    return out


def divmod_digits(k: int, n: int) -> list[int]:
    digits = []
    for _ in range(n):
        k, r = divmod(k, n)
        digits.append(r)
    return digits[::-1]


@dataclass(frozen=True)
class CyclicAutExample:
    directive: DirectiveSequence
    phi_star: BlockCode  # letterwise map of order n on the base alphabet
    seed_words: tuple[tuple[int, ...], ...]
    params: AutExampleParams


def gen_cyclic_aut_example(params: AutExampleParams) -> CyclicAutExample:
    """Tower over an n^2-letter alphabet whose letterwise cyclic map has
    exact order n on the generated language."""
    params.validate()
    n, m = params.n, params.resolved_m()
    base = Alphabet(["%d.%d" % (r, s) for r in range(n) for s in range(n)])
    upper = Alphabet(["".join(map(str, divmod_digits(k, n)))
                      for k in range(n ** n)])

    def f(r, s):
        return r * n + s

    phi = BlockCode.letterwise(base, {f(r, s): f(r, (s + 1) % n)
                                      for r in range(n) for s in range(n)})
    seeds = _aut_seed_words(n, m)

    # bottom: alpha (a word over 0..n-1) -> f(alpha(0),0) ... f(alpha(n-1),n-1)
    bottom_imgs = []
    for k in range(n ** n):
        alpha = divmod_digits(k, n)
        bottom_imgs.append(base.word([f(alpha[c], c) for c in range(n)]))
    bottom = Morphism(upper, base, tuple(bottom_imgs))

    # upper (stationary): alpha -> the (mn+1) n-grams of u_{alpha(0)}...u_{alpha(n-1)}
    upper_imgs = []
    for k in range(n ** n):
        alpha = divmod_digits(k, n)
        stream = [x for c in range(n) for x in seeds[alpha[c]]]
        assert len(stream) == n * (m * n + 1)
        letters = []
        for j in range(m * n + 1):
            gram = stream[j * n:(j + 1) * n]
            letters.append(int("".join(map(str, gram)), n) if n > 1 else 0)
        upper_imgs.append(upper.word(letters))
    sigma = Morphism(upper, upper, tuple(upper_imgs))
    levels = [bottom] + [sigma] * params.depth
    d = DirectiveSequence(levels, tail_rule=lambda k: sigma)
    return CyclicAutExample(d, phi, tuple(seeds), params)


@dataclass
class CyclicAutReport:
    order: int
    m: int
    depth: int
    u_properties_ok: bool
    phi_order: int
    divisors: list[int]
    shifted_occurrences_checked: int
    language_lengths_closed: list[int]

    def lines(self):
        return [
            "cyclic automorphism claims (order %d, m %d, depth %d)"
            % (self.order, self.m, self.depth),
            "  [claim:seed-word-properties] exhaustive scan: %s"
            % ("ok" if self.u_properties_ok else "FAILED"),
            "  [claim:letter-map-order] order %d: ok" % self.phi_order,
            "  [claim:scale-pattern] divisors %s: ok"
            % " ".join(map(str, self.divisors)),
            "  [claim:shifted-block-occurrence] %d cases: ok"
            % self.shifted_occurrences_checked,
            "  [claim:language-closure] lengths %s: ok"
            % ",".join(map(str, self.language_lengths_closed)),
        ]


def check_u_properties(seeds, n: int, m: int):
    """The four seed-word properties, verified exhaustively."""
    L = m * n + 1
    if len(seeds) != n or len(set(seeds)) != n:
        raise ClaimFailure("need n distinct seed words")
    if any(len(u) != L for u in seeds):
        raise ClaimFailure("seed word of wrong length")
    first = seeds[0]
    if any(u[:n] != first[:n] for u in seeds):
        raise ClaimFailure("common prefix property fails")
    if any(u[L - n:] != first[L - n:] for u in seeds):
        raise ClaimFailure("common suffix property fails")
    blocks = [tuple(divmod_digits(k, n)) for k in range(n ** n)]
    want_pairs = {a + b for a in blocks for b in blocks}
    for u in seeds:
        got = {tuple(u[k * n:(k + 2) * n]) for k in range(m)}
        if not want_pairs <= got:
            raise ClaimFailure("pair coverage fails")
    for u in seeds:
        for up in seeds:
            for upp in seeds:
                double = up + upp
                hits = [i for i in range(len(double) - L + 1)
                        if tuple(double[i:i + L]) == u]
                if not set(hits) <= {0, L}:
                    raise ClaimFailure("occurrence rigidity fails")
                if 0 in hits and u != up:
                    raise ClaimFailure("occurrence rigidity fails at 0")
                if L in hits and u != upp:
                    raise ClaimFailure("occurrence rigidity fails at %d" % L)


def check_cyclic_aut_claims(example: CyclicAutExample, depth: int,
                            language_lengths: Optional[list[int]] = None
                            ) -> CyclicAutReport:
    """Verify the cyclic-example claims at every level up to `depth`."""
    from .sadic import language, language_is_exact

    params = example.params
    n, m = params.n, params.resolved_m()
    d = example.directive

    check_u_properties(example.seed_words, n, m)

    table = {k: example.phi_star.table[bytes([k])]
             for k in range(len(d.alphabet(0)))}
    order = 1
    cur = table
    while any(cur[k] != k for k in table):
        cur = {k: table[cur[k]] for k in cur}
        order += 1
    if order != n:
        raise ClaimFailure("letter map has order %d, wanted %d" % (order, n))

    divisors = scale_divisors(d, depth)
    for i, dv in enumerate(divisors):
        if dv != n * (m * n + 1) ** i:
            raise ClaimFailure("scale divisor %d is %d, wanted n(mn+1)^i"
                               % (i, dv))

    trans = bytes(table.get(k, k) for k in range(256))
    checked = 0
    for i in range(depth):
        level_words = d.level_words(i + 1)
        step = (m * n + 1) ** i
        upper_letters = [tuple(divmod_digits(k, n))
                         for k in range(n ** n)]
        index_of = {blk: j for j, blk in enumerate(upper_letters)}
        for bi, beta in enumerate(upper_letters):
            for gi, gamma in enumerate(upper_letters):
                double = level_words[bi].data + level_words[gi].data
                for s in range(1, n):
                    alpha = (beta + gamma)[s:s + n]
                    target = level_words[index_of[alpha]].data
                    shifted = target
                    for _ in range(s):
                        shifted = shifted.translate(trans)
                    if double[s * step:s * step + len(shifted)] != shifted:
                        raise ClaimFailure(
                            "shifted block occurrence fails (level %d, s=%d)"
                            % (i, s))
                    checked += 1

    lengths = language_lengths if language_lengths is not None else list(range(1, n + 1))
    closed = []
    for ell in lengths:
        ld = 1
        while not language_is_exact(d, ell, ld):
            ld += 1
            d.check_depth(ld)
        lang = {w.data for w in language(d, ell, ld)}
        image = {b.translate(trans) for b in lang}
        if image != lang:
            raise ClaimFailure("letter map does not preserve the length-%d"
                               " language" % ell)
        closed.append(ell)

    return CyclicAutReport(n, m, depth, True, order, divisors, checked, closed)
