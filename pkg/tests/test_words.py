import itertools
import random

import pytest

from toepkit.words import (
    Alphabet,
    BlockCode,
    Word,
    buildings,
    coincidence_set,
    common_prefix_length,
    common_suffix_length,
    distinguished_prefix,
    distinguished_suffix,
    is_euclidean_pair,
    is_uniquely_built,
    occurrences,
    primitive_root,
)

AB = Alphabet("ab")
BIN = Alphabet("01")


def w(text, alph=AB):
    return alph.parse(text)


# ---------------------------------------------------------------- oracles

def naive_occurrences(needle, hay):
    return [i for i in range(len(hay) - len(needle) + 1)
            if hay.sub(i, i + len(needle)) == needle]


def naive_root(u):
    for ell in range(1, len(u) + 1):
        if len(u) % ell == 0 and u.sub(0, ell) * (len(u) // ell) == u:
            return u.sub(0, ell), len(u) // ell


def brute_buildings(word, code):
    """Exhaustive recursive parse search, independent of the library DP."""
    out = []
    n = len(word)
    for i in range(n + 1):
        pre_ok = [si for si, s in enumerate(code)
                  if i < len(s) and s.sub(len(s) - i, len(s)) == word.sub(0, i)]
        if not pre_ok:
            continue

        def rec(pos, blocks):
            suf_ok = [si for si, s in enumerate(code)
                      if n - pos < len(s) and s.sub(0, n - pos) == word.sub(pos, n)]
            if suf_ok:
                out.append((word.sub(0, i), tuple(blocks), word.sub(pos, n)))
            for s in code:
                if pos + len(s) <= n and word.sub(pos, pos + len(s)) == s:
                    rec(pos + len(s), blocks + [s])

        rec(i, [])
    return out


def family_prefix_sets(first, u, v, length):
    """Sets of length-`length` prefixes of first·{u,v}*, by exhaustive
    concatenation (independent of the production state-walk)."""
    done = set()
    frontier = {first.data}
    while frontier:
        nxt = set()
        for x in frontier:
            if len(x) >= length:
                done.add(x[:length])
            else:
                nxt.add(x + u.data)
                nxt.add(x + v.data)
        frontier = nxt
    return done


def oracle_distinguished(u, v):
    """First index where the two concatenation families are forced to
    disagree, via full enumeration up to |u|+|v|+1."""
    bound = len(u) + len(v) + 1
    pu = family_prefix_sets(u, u, v, bound)
    pv = family_prefix_sets(v, u, v, bound)
    for n in range(bound):
        su = {x[n] for x in pu}
        sv = {x[n] for x in pv}
        if su.isdisjoint(sv):
            return n
    return None


def random_word(rng, alph, lo, hi):
    return alph.word([rng.randrange(len(alph)) for _ in range(rng.randint(lo, hi))])


# ------------------------------------------------------------ occurrences

def test_occurrences_examples():
    assert occurrences(w("ab"), w("abab")) == [0, 2]
    assert occurrences(w("aa"), w("ab")) == []
    u = w("ababa")
    assert occurrences(w("aba"), u) == [0, 2]
    assert occurrences(w("aba"), u) == naive_occurrences(w("aba"), u)


def test_occurrences_random_against_naive():
    rng = random.Random(11)
    for _ in range(200):
        hay = random_word(rng, AB, 0, 30)
        needle = random_word(rng, AB, 1, 4)
        assert occurrences(needle, hay) == naive_occurrences(needle, hay)


def test_occurrences_alphabet_mismatch():
    with pytest.raises(ValueError):
        occurrences(w("ab"), BIN.parse("01"))


# ---------------------------------------------------------------- reverse

def test_reverse_examples():
    assert BIN.parse("011").reverse() == BIN.parse("110")
    assert BIN.parse("").reverse() == BIN.parse("")


def test_reverse_involution_random():
    rng = random.Random(7)
    for _ in range(100):
        u = random_word(rng, BIN, 0, 64)
        assert u.reverse().reverse() == u
        assert len(u.reverse()) == len(u)


# --------------------------------------------------------- primitive root

def test_primitive_root_examples():
    assert primitive_root(w("abab")) == (w("ab"), 2)
    assert primitive_root(w("aba")) == (w("aba"), 1)
    assert primitive_root(w("aaaaaa")) == (w("a"), 6)


def test_primitive_root_empty_rejected():
    with pytest.raises(ValueError):
        primitive_root(w(""))


def test_primitive_root_against_divisor_scan():
    rng = random.Random(3)
    for _ in range(100):
        u = random_word(rng, AB, 1, 24)
        assert primitive_root(u) == naive_root(u)


# ---------------------------------------------------------- Euclidean pair

def test_euclidean_examples():
    assert is_euclidean_pair(w("abab"), w("ab"))
    assert not is_euclidean_pair(w("ab"), w("ba"))
    assert is_euclidean_pair(w("a"), w("aaa"))
    with pytest.raises(ValueError):
        is_euclidean_pair(w(""), w("a"))


def test_euclidean_matches_commutation_criterion():
    # classical: u,v share a primitive root iff uv = vu
    rng = random.Random(5)
    for _ in range(300):
        u = random_word(rng, BIN, 1, 8)
        v = random_word(rng, BIN, 1, 8)
        assert is_euclidean_pair(u, v) == (u + v == v + u)


# ---------------------------------------------------- distinguished affixes

def test_distinguished_prefix_example():
    aff = distinguished_prefix(w("aab"), w("ab"))
    assert aff.word == w("a") and aff.length == 1
    sym = distinguished_prefix(w("ab"), w("aab"))
    assert sym.word == aff.word and sym.length == aff.length


def test_distinguished_prefix_euclidean_rejected():
    with pytest.raises(ValueError):
        distinguished_prefix(w("abab"), w("ab"))


def test_distinguished_prefix_random_against_enumeration():
    rng = random.Random(23)
    seen = 0
    while seen < 200:
        u = random_word(rng, BIN, 1, 8)
        v = random_word(rng, BIN, 1, 8)
        if is_euclidean_pair(u, v):
            continue
        seen += 1
        aff = distinguished_prefix(u, v)
        n = oracle_distinguished(u, v)
        assert n is not None and n < len(u) + len(v)
        assert aff.length == n
        # the forced prefix is a common prefix of both families
        sample = next(iter(family_prefix_sets(u, u, v, n)))
        assert sample == aff.word.data


def test_distinguished_suffix():
    aff = distinguished_suffix(BIN.parse("100"), BIN.parse("10"))
    # mirror of the (001, 01) prefix example
    assert aff.word == BIN.parse("0") and aff.length == 1

    rng = random.Random(29)
    for _ in range(100):
        u = random_word(rng, BIN, 1, 8)
        v = random_word(rng, BIN, 1, 8)
        if is_euclidean_pair(u, v):
            continue
        left = distinguished_suffix(u, v)
        right = distinguished_prefix(u.reverse(), v.reverse())
        assert left.word == right.word.reverse()
        assert left.length < len(u) + len(v)


# -------------------------------------------------------------- buildings

def test_buildings_single_block_word():
    bs = buildings(w("abab"), {w("ab")})
    assert len(bs) == 1
    b = bs[0]
    assert b.prefix_fragment == w("") and b.suffix_fragment == w("")
    assert b.blocks == (w("ab"), w("ab"))


def test_buildings_fragments_only():
    bs = buildings(w("aa"), {w("ab"), w("ba")})
    assert len(bs) == 1
    b = bs[0]
    assert b.prefix_fragment == w("a") and b.blocks == () and b.suffix_fragment == w("a")


def test_buildings_short_word_two_parses():
    bs = buildings(w("a"), {w("aa")})
    shapes = {(b.prefix_fragment.display(), len(b.blocks), b.suffix_fragment.display())
              for b in bs}
    assert shapes == {("a", 0, ""), ("", 0, "a")}


def test_buildings_match_brute_force():
    rng = random.Random(41)
    for _ in range(150):
        code = []
        while len(set(code)) < 2:
            code = [random_word(rng, AB, 1, 3) for _ in range(2)]
        code = sorted(set(code), key=lambda x: (len(x), x.data))
        word = random_word(rng, AB, 1, 10)
        got = {(b.prefix_fragment, b.blocks, b.suffix_fragment)
               for b in buildings(word, code)}
        want = set(brute_buildings(word, code))
        assert got == want
        for b in buildings(word, code):
            assert b.concatenation() == word


def test_buildings_completeness_for_built_words():
    rng = random.Random(43)
    for _ in range(100):
        code = {random_word(rng, AB, 1, 4), random_word(rng, AB, 1, 4)}
        parts = [rng.choice(sorted(code)) for _ in range(rng.randint(2, 6))]
        word = parts[0]
        for p in parts[1:]:
            word = word + p
        # the full concatenation always parses (empty fragments)
        assert len(buildings(word, code)) >= 1
        # windows long enough to contain a whole block parse too
        floor = 2 * max(len(c) for c in code) - 1
        if len(word) > floor:
            i = rng.randint(0, len(word) - floor - 1)
            j = rng.randint(i + floor, len(word))
            assert len(buildings(word.sub(i, j), code)) >= 1


def test_is_uniquely_built_examples():
    assert is_uniquely_built(w("abab"), {w("ab")})
    assert not is_uniquely_built(w("a"), {w("aa")})


def test_unique_building_glue_property():
    # if w1w2, w2, w2w3 are uniquely built and every piece is longer than
    # twice the longest code word, the triple concatenation is too
    rng = random.Random(47)
    checked = 0
    while checked < 100:
        code = set()
        while len(code) < 2:
            code.add(random_word(rng, BIN, 1, 3))
        code = sorted(code)
        m = max(len(c) for c in code)

        def chunk():
            word = code[0].alphabet.empty()
            while len(word) <= 2 * m:
                word = word + rng.choice(code)
            return word

        w1, w2, w3 = chunk(), chunk(), chunk()
        if not (is_uniquely_built(w1 + w2, code)
                and is_uniquely_built(w2, code)
                and is_uniquely_built(w2 + w3, code)):
            continue
        checked += 1
        assert is_uniquely_built(w1 + w2 + w3, code), (
            w1.display(), w2.display(), w3.display(),
            [c.display() for c in code])


# --------------------------------------------------------- coincidence set

def test_coincidence_set():
    u = BIN.parse("0010")
    v = BIN.parse("0110")
    assert coincidence_set([u, v]) == frozenset({0, 2, 3})
    assert coincidence_set([u]) == frozenset(range(4))
    triples = [a + b + c for a in (u, v) for b in (u, v) for c in (u, v)]
    assert len(triples) == 8
    coinc = coincidence_set(triples)
    # positions where u and v agree, replicated over the three slots
    base = coincidence_set([u, v])
    assert coinc == frozenset(i + 4 * k for k in range(3) for i in base)


def test_coincidence_set_unequal_lengths():
    with pytest.raises(ValueError):
        coincidence_set([w("ab"), w("a")])


# -------------------------------------------------------------- block codes

def test_letterwise_codes():
    ident = BlockCode.letterwise(BIN, {0: 0, 1: 1})
    assert ident.apply_to_word(BIN.parse("0101")) == BIN.parse("0101")
    flip = BlockCode.letterwise(BIN, {0: 1, 1: 0})
    assert flip.apply_to_word(BIN.parse("0101")) == BIN.parse("1010")


def test_majority_code():
    table = {}
    for bits in itertools.product((0, 1), repeat=3):
        table[bytes(bits)] = 1 if sum(bits) >= 2 else 0
    maj = BlockCode(BIN, BIN, 3, table)
    u = BIN.parse("0110100")
    expect = BIN.word([1 if u[i - 1] + u[i] + u[i + 1] >= 2 else 0
                       for i in range(1, len(u) - 1)])
    assert maj.apply_to_word(u) == expect
    with pytest.raises(ValueError):
        maj.apply_to_word(BIN.parse("01"))


# ------------------------------------------------------------- misc helpers

def test_common_affix_lengths():
    assert common_prefix_length(BIN.parse("0010"), BIN.parse("0110")) == 1
    assert common_suffix_length(BIN.parse("0010"), BIN.parse("0110")) == 2


def test_word_display_and_parse_roundtrip():
    named = Alphabet(["aa", "bb"])
    u = named.word(["aa", "bb", "aa"])
    assert u.display() == "aa bb aa"
    assert named.parse(u.display()) == u
    assert BIN.parse(BIN.parse("0110").display()) == BIN.parse("0110")
