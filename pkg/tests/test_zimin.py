import itertools

import pytest

from corpus import (
    chain_semilattice,
    cyclic_group,
    full_shift,
    golden_mean,
    period2_syntactic_table,
    period_shift,
    trivial_semigroup,
)
from soficsemi import (
    evaluate_zimin,
    is_aggm,
    loop_language,
    power_factorial,
    rational_bound_check,
    shortlex_stream,
    syntactic_semigroup,
)
from soficsemi.errors import InvalidState
from soficsemi.zimin import ZiminTerm, in_minimal_ideal, phi_image_of_language


def take(stream, k):
    return list(itertools.islice(stream, k))


def test_loop_language_full_shift():
    T = loop_language(full_shift(2), 0)
    assert T.m == 1
    assert take(shortlex_stream(T), 6) == [
        ("a",), ("b",), ("a", "a"), ("a", "b"), ("b", "a"), ("b", "b"),
    ]


def test_loop_language_golden_mean():
    T = loop_language(golden_mean(), 0)
    words = take(shortlex_stream(T), 4)
    assert words == [("a",), ("a", "a"), ("b", "a"), ("a", "a", "a")]
    assert T.dfa.accepts(("a", "b", "a"))
    assert not T.dfa.accepts(("b",))
    # path enumeration oracle to length 4
    loops = set()
    frontier = [((), 0)]
    for _ in range(4):
        nxt = []
        for w, s in frontier:
            for (_, a, t) in golden_mean().out(s):
                nxt.append((w + (a,), t))
                if t == 0:
                    loops.add(w + (a,))
        frontier = nxt
    for n in range(1, 5):
        for w in itertools.product("ab", repeat=n):
            assert T.dfa.accepts(w) == (w in loops)


def test_loop_language_period2_is_ab_plus():
    T = loop_language(period_shift(2), 0)
    assert take(shortlex_stream(T), 3) == [
        ("a", "b"), ("a", "b", "a", "b"), ("a", "b", "a", "b", "a", "b"),
    ]


def test_loop_language_invalid_state():
    with pytest.raises(InvalidState):
        loop_language(golden_mean(), 7)


def test_power_factorial():
    S = period2_syntactic_table()
    e = 2  # ab, idempotent
    assert power_factorial(S, e, 5) == e
    assert power_factorial(S, 0, 2) == S.zero  # a^2 = 0
    Z3 = cyclic_group(3)
    # s of period 3: s^(3!) = s^6 = identity
    assert power_factorial(Z3, 1, 3) == Z3.identity
    # small factorial below the index is not reduced: x with x^4 = x^3
    from soficsemi import FiniteSemigroup

    C = FiniteSemigroup(
        [[min(i + j + 1, 2) for j in range(3)] for i in range(3)], [0]
    )
    assert power_factorial(C, 0, 2) == C.mul(0, 0)  # x^2
    assert power_factorial(C, 0, 4) == 2  # x^24 = x^3


def test_power_factorial_against_direct_powers():
    S = period2_syntactic_table()
    import math

    for s in range(S.n):
        for n in range(1, 6):
            assert power_factorial(S, s, n) == S.power(s, math.factorial(n))


def test_evaluate_zimin_trivial_and_absorbing():
    T = loop_language(full_shift(2), 0)
    S1 = trivial_semigroup()
    res = evaluate_zimin(T, S1, {"a": 0, "b": 0})
    assert res.value == 0 and res.stop_index == 1

    SL = chain_semilattice()
    res2 = evaluate_zimin(T, SL, {"a": 1, "b": 1})
    assert res2.value == 1  # the absorbing element


def test_evaluate_zimin_period2():
    D = syntactic_semigroup(period_shift(2))
    T = loop_language(period_shift(2), 0)
    res = evaluate_zimin(T, D.semigroup, D.letter_map)
    assert D.semigroup.is_idempotent(res.value)
    assert res.value == D.image(("a", "b"))
    ok, j = is_aggm(D.semigroup)
    assert res.value in j
    assert in_minimal_ideal(D.semigroup, res.image, res.value)
    assert res.stop_index <= res.bound


def test_evaluate_zimin_image_set():
    D = syntactic_semigroup(golden_mean())
    T = loop_language(golden_mean(), 0)
    img = phi_image_of_language(T.dfa, D.semigroup, D.letter_map)
    # oracle: evaluate all loop words up to length 6
    expect = set()
    for n in range(1, 7):
        for w in itertools.product("ab", repeat=n):
            if T.dfa.accepts(w):
                expect.add(D.image(w))
    assert expect <= img


def test_zimin_term_structure():
    t = ZiminTerm.leaf(("a",))
    t = t.extend(("b",), 2)
    t = t.extend(("a", "b"), 3)
    assert t.word_length() == ((2 * (1 * 2 + 1) * 2) + 2) * 6
    assert t.pretty() == "((a b a)^(2!) ab (a b a)^(2!))^(3!)"


def test_rational_bound_check():
    S1 = trivial_semigroup()
    T = loop_language(full_shift(2), 0)
    assert rational_bound_check(T.dfa, S1, {"a": 0, "b": 0})
    D = syntactic_semigroup(period_shift(2))
    d = syntactic_semigroup(period_shift(2)).dfa
    assert rational_bound_check(d, D.semigroup, D.letter_map)
    S4 = period2_syntactic_table()
    assert rational_bound_check(factor_dfa_full(), S4, {"a": 0, "b": 1})


def factor_dfa_full():
    from soficsemi import factor_dfa

    return factor_dfa(full_shift(2))
