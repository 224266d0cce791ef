import pytest

from toepkit.sadic import language, language_is_exact, scale_divisors, serialize_directive, structural_flags
from toepkit.words import Word
from toepkit.constructions import (
    BIN,
    AutExampleParams,
    ClaimFailure,
    CounterexampleParams,
    check_counterexample_claims,
    check_cyclic_aut_claims,
    check_u_properties,
    gen_counterexample,
    gen_cyclic_aut_example,
    gen_flip_example,
    p4,
    default_m,
)


# ----------------------------------------------------------- counterexample

def test_counterexample_seeds_and_lengths():
    d = gen_counterexample(CounterexampleParams(depth=2))
    assert [w.display() for w in d.level_words(1)] == ["0", "1"]
    w1, w2 = d.level_words(2)
    m0 = default_m(0)
    assert len(w1) == 4 * m0 and len(w2) == 8 * m0


def test_counterexample_block_layout():
    d = gen_counterexample(CounterexampleParams(depth=3))
    divs = scale_divisors(d, 4)
    for n in range(3):
        base, nxt1, nxt2 = d.level_words(n + 1), *d.level_words(n + 2)
        w1, w2 = base
        m = divs[n + 1] // (4 * divs[n])
        md = m * divs[n]
        # first word: starts w1 w1 (w1 w2)^4, has w1^2 at 2md, ends w1^2
        assert nxt1.starts_with(w1 * 2 + (w1 + w2) * 4)
        assert nxt1.sub(2 * md, 2 * md + 2 * len(w1)) == w1 * 2
        assert nxt1.ends_with(w1 * 2)
        # second word: starts (w1 w2)^2; w1^2 at 2md and 6md; w2^2 at 4md
        assert nxt2.starts_with((w1 + w2) * 2)
        assert nxt2.sub(2 * md, 2 * md + 2 * len(w1)) == w1 * 2
        assert nxt2.sub(4 * md, 4 * md + 2 * len(w2)) == w2 * 2
        assert nxt2.sub(6 * md, 6 * md + 2 * len(w1)) == w1 * 2
        assert nxt2.ends_with(w1 * 2)


def test_counterexample_primitive_and_proper():
    d = gen_counterexample(CounterexampleParams(depth=3))
    for n in range(1, 4):
        flags = structural_flags(d.morphism(n))
        assert flags.proper
        img1, img2 = d.morphism(n).images
        assert set(img1.data) == {0, 1} and set(img2.data) == {0, 1}


def test_counterexample_claims_depth3():
    d = gen_counterexample(CounterexampleParams(depth=3))
    report = check_counterexample_claims(d, 3)
    assert report.prefix_inequality_levels == [1, 2, 3]
    assert len(report.witnesses_left) == 3
    assert len(report.witnesses_right) == 3
    assert report.anchor_periods_checked == report.d_values[1:]
    # q_n is the running sum of the divisors
    assert report.q_values == [0] + [sum(report.d_values[:n]) for n in range(1, 4)]


def test_counterexample_floor_enforced():
    with pytest.raises(ValueError):
        gen_counterexample(CounterexampleParams(depth=2, m_schedule=(4,)))
    with pytest.raises(ValueError):
        gen_counterexample(CounterexampleParams(depth=2, m_schedule=(10, 6)))
    # floors themselves are fine
    d = gen_counterexample(CounterexampleParams(depth=2, m_schedule=(5, 7)))
    check_counterexample_claims(d, 2)


def test_counterexample_determinism():
    a = serialize_directive(gen_counterexample(CounterexampleParams(depth=3)))
    b = serialize_directive(gen_counterexample(CounterexampleParams(depth=3)))
    assert a == b


def test_counterexample_tail_rule():
    d = gen_counterexample(CounterexampleParams(depth=1))
    # levels beyond the listed depth come from the schedule defaults
    divs = scale_divisors(d, 4)
    assert divs[2] == 4 * default_m(1) * divs[1]
    assert divs[3] == 4 * default_m(2) * divs[2]


# ------------------------------------------------------------- flip example

def flip_word(w):
    return Word(w.alphabet, bytes(1 - b for b in w.data))


def test_flip_seeds():
    ex = gen_flip_example(2)
    w = ex.directive.level_words(1)
    assert [x.display() for x in w] == [
        "00011110", "00011000", "01111110", "01111000"]


def test_flip_matches_direct_recursion():
    ex = gen_flip_example(3)
    u, v = BIN.parse("0001"), BIN.parse("0111")
    for depth in range(1, 4):
        words = ex.directive.level_words(depth)
        fu, fv = flip_word(u), flip_word(v)
        assert words[0] == u + fu
        assert words[1] == u + fv
        assert words[2] == v + fu
        assert words[3] == v + fv
        u, v = (u + fu + u + fv + v + fu + v + fv + u + fu + u,
                u + fu + u + fv + v + fu + v + fv + v + fu + u)


def test_flip_structural_flags():
    ex = gen_flip_example(2)
    f0 = structural_flags(ex.directive.morphism(0))
    assert f0.constant_length == 8 and f0.proper
    f1 = structural_flags(ex.directive.morphism(1))
    assert f1.constant_length == 11 and f1.proper


def test_flip_preserves_language():
    ex = gen_flip_example(3)
    d = ex.directive
    for ell in (1, 2, 4, 8):
        depth = 2
        while not language_is_exact(d, ell, depth):
            depth += 1
        lang = language(d, ell, depth)
        flipped = {flip_word(w) for w in lang}
        assert flipped == lang


# -------------------------------------------------------- cyclic automorphism

def test_aut_params_floor():
    p = AutExampleParams(n=2, depth=2)
    assert p.floor == 40 and p.resolved_m() == 40
    with pytest.raises(ValueError):
        AutExampleParams(n=2, depth=2, m=39).validate()
    with pytest.raises(ValueError):
        AutExampleParams(n=2, depth=2, m=41).validate()  # parity
    AutExampleParams(n=2, depth=2, m=42).validate()


def test_aut_seed_words_n2():
    ex = gen_cyclic_aut_example(AutExampleParams(n=2, depth=1))
    n, m = 2, 40
    assert len(ex.seed_words) == 2
    for t, u in enumerate(ex.seed_words):
        assert len(u) == m * n + 1
        # the run t^(6n+1) is present
        run = (t,) * (6 * n + 1)
        assert any(u[i:i + len(run)] == run for i in range(len(u)))
    check_u_properties(ex.seed_words, n, m)


def test_aut_u_properties_catch_mutation():
    ex = gen_cyclic_aut_example(AutExampleParams(n=2, depth=1))
    bad = list(ex.seed_words)
    u = list(bad[0])
    u[0] ^= 1  # break the common prefix
    bad[0] = tuple(u)
    with pytest.raises(ClaimFailure):
        check_u_properties(tuple(bad), 2, 40)


def test_aut_level_structure_n2():
    ex = gen_cyclic_aut_example(AutExampleParams(n=2, depth=2))
    d = ex.directive
    n, m = 2, 40
    assert len(d.alphabet(0)) == n * n
    assert len(d.alphabet(1)) == n ** n
    lens = [len(w) for w in d.level_words(2)]
    assert set(lens) == {n * (m * n + 1)}
    assert scale_divisors(d, 2) == [n, n * (m * n + 1)]


def test_aut_claims_n2():
    ex = gen_cyclic_aut_example(AutExampleParams(n=2, depth=2))
    rep = check_cyclic_aut_claims(ex, 2)
    assert rep.phi_order == 2
    assert rep.u_properties_ok
    assert rep.divisors == [2, 162]
    assert rep.shifted_occurrences_checked > 0


def test_aut_determinism():
    a = serialize_directive(gen_cyclic_aut_example(AutExampleParams(n=2, depth=2)).directive)
    b = serialize_directive(gen_cyclic_aut_example(AutExampleParams(n=2, depth=2)).directive)
    assert a == b


def test_aut_padded_m_still_valid():
    ex = gen_cyclic_aut_example(AutExampleParams(n=2, depth=1, m=44))
    check_u_properties(ex.seed_words, 2, 44)
