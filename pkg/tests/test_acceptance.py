"""Acceptance suite: one criterion per test, one pass/fail line each.

Each criterion pins its tolerance and time budget; failures print the
criterion number so the run is auditable at a glance.
"""

import itertools
import math
import random
import time

import pytest

from corpus import (
    chain_semilattice,
    corpus_presentations,
    cyclic_group,
    even_shift,
    full_shift,
    golden_mean,
    golden_mean_syntactic_table,
    group_with_zero,
    period2_syntactic_table,
    period_shift,
    random_transformation_semigroup,
    trivial_semigroup,
)
from soficsemi import (
    PartialTransformation,
    aggm_backward_check,
    aggm_forward_check,
    build_cover,
    check_sync_delay,
    close_generators,
    complexity,
    entropy_estimate,
    entropy_gap_check,
    evaluate_zimin,
    factor_dfa,
    higher_block,
    is_aggm,
    lift_jclass,
    loop_language,
    syntactic_semigroup,
    wreath_product_0simple_check,
)
from soficsemi.errors import NotAGGM
from soficsemi.shiftspace import is_primitive
from soficsemi.wreath import preimage_completeness_check
from soficsemi.zimin import in_minimal_ideal
from test_finsemi import action_quotient, assert_green_matches_oracle

GOLDEN_ENTROPY = math.log2((1 + math.sqrt(5)) / 2)


def report(number, label, ok=True, note=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number} {status} {label}" + (f" ({note})" if note else ""))
    assert ok, f"criterion {number}: {label}"


def test_criterion_1_aggm_equivalence():
    start = time.time()
    for name, P in corpus_presentations():
        rep = aggm_forward_check(P)
        assert rep["is_aggm"], name
    hand_built = [
        (trivial_semigroup(), full_shift(1)),
        (chain_semilattice(), period_shift(1)),  # a+ inside a two-letter alphabet
        (period2_syntactic_table(), period_shift(2)),
        (golden_mean_syntactic_table(), golden_mean()),
        (
            close_generators(
                [  # even-shift letter actions on its 4-state minimal automaton
                    PartialTransformation((1, 1, 3, 3)),
                    PartialTransformation((0, 2, 1, 3)),
                ]
            ),
            even_shift(),
        ),
    ]
    for S, reference in hand_built:
        dfa, rep = aggm_backward_check(S)
        assert rep["is_aggm"]
        if reference is not None:
            assert factor_dfa(reference).equivalent(dfa)
        if S.n > 1:
            # reconstructed language is factorial and irreducible at word level
            words = dfa.words_up_to(6)
            wset = set(words)
            for w in words:
                for i in range(len(w)):
                    for j in range(i + 1, len(w) + 1):
                        if 0 < j - i < len(w):
                            assert w[i:j] in wset
            short = [w for w in words if len(w) <= 2]
            glue = [w for w in words if len(w) <= 4] + [()]
            for u in short:
                for v in short:
                    assert any(
                        len(u + m + v) <= 10 and dfa.accepts(u + m + v) for m in glue
                    ), (u, v)
    with pytest.raises(NotAGGM):
        aggm_backward_check(group_with_zero(2))
    elapsed = time.time() - start
    report(1, "AGGM equivalence on corpus and hand-built inputs",
           elapsed <= 10, f"{elapsed:.1f}s")


def test_criterion_2_computable_idempotent():
    start = time.time()
    for name, P in corpus_presentations():
        D = syntactic_semigroup(P)
        ok, j = is_aggm(D.semigroup)
        assert ok
        for v in range(P.n_states):
            T = loop_language(P, v)
            res = evaluate_zimin(T, D.semigroup, D.letter_map)
            assert D.semigroup.is_idempotent(res.value), name
            assert in_minimal_ideal(D.semigroup, res.image, res.value), name
            assert res.stop_index <= res.bound, name
            assert res.value in j, name
    elapsed = time.time() - start
    report(2, "computable idempotent lands in the distinguished class",
           elapsed <= 5, f"{elapsed:.1f}s")


def test_criterion_3_cover_construction():
    start = time.time()
    # instance A: alpha = id (trivial kernel)
    D1 = syntactic_semigroup(golden_mean(), extra_letters=("c",))
    H1 = trivial_semigroup()
    res1 = build_cover(D1, H1, [0], ("a", "b"), ("a",), cap=2_000_000)
    # instance B: |H| = 2 |K|, |N| = 2
    D2 = syntactic_semigroup(even_shift(), extra_letters=("c",))
    H2 = cyclic_group(2)
    res2 = build_cover(D2, H2, [0, 0], ("a", "b", "b"), ("a",), cap=2_000_000)

    for D, res in ((D1, res1), (D2, res2)):
        # rho . eta = phi on all generator words up to length 10
        frontier = [((), None)]
        for _ in range(10):
            nxt = []
            for w, _ in frontier:
                for a in D.alphabet:
                    w2 = w + (a,)
                    assert res.rho[res.eta(w2)] == D.image(w2)
                    nxt.append((w2, None))
            frontier = nxt
        # theta is a group isomorphism onto H with alpha . theta = rho
        assert res.report["theta_iso"] and res.report["alpha_theta_is_rho"]
        assert res.report["subgroup_size"] == res.group_h.n
        # zero criterion on 10^4 sampled words
        rng = random.Random(1)
        for _ in range(10 ** 4):
            w = tuple(rng.choice(D.alphabet) for _ in range(rng.randint(1, 14)))
            assert res.s_prime.names[res.eta(w)].is_zero() == (D.image(w) == D.zero)
        # preimage sets on all language words containing x_n, length <= 8
        xn = D.alphabet[-2]
        for n in range(1, 9):
            for w in itertools.product(D.alphabet[:-1], repeat=n):
                if xn not in w or D.image(w) == D.zero:
                    continue
                blocks, preimages = preimage_completeness_check(res, w)
                assert blocks == preimages, w
    elapsed = time.time() - start
    report(3, "wreath cover with verified subgroup isomorphism",
           elapsed <= 60, f"{elapsed:.1f}s")


def test_criterion_4_entropy():
    start = time.time()
    gm = entropy_estimate(golden_mean(), n_max=24)
    assert abs(gm.value - 0.69424) <= 1e-4
    assert abs(gm.counting - 0.69424) <= 1e-4
    assert abs(entropy_estimate(full_shift(2)).value - 1.0) <= 1e-6
    assert abs(entropy_estimate(full_shift(3)).value - math.log2(3)) <= 1e-6
    for k in (1, 2, 3, 4):
        assert entropy_estimate(period_shift(k)).value == 0.0
    for _, P in corpus_presentations():
        prof = complexity(P, 24)
        for n in range(1, 24):
            for m in range(1, 24 - n + 1):
                assert prof.q(n + m) <= prof.q(n) * prof.q(m)
    assert entropy_gap_check(full_shift(2), golden_mean())
    assert entropy_gap_check(golden_mean(), period_shift(2))
    assert entropy_gap_check(full_shift(2), even_shift())
    elapsed = time.time() - start
    report(4, "entropy by counting and Perron methods", True, f"{elapsed:.1f}s")


def test_criterion_5_higher_block_conjugacy():
    start = time.time()
    for name, P in corpus_presentations():
        d = factor_dfa(P)
        q = d.count_words(8 + 3)
        for N in (1, 2, 3, 4):
            qN = factor_dfa(higher_block(P, N)).count_words(8)
            for n in range(1, 9):
                assert qN[n - 1] == q[n + N - 2], (name, N, n)
    elapsed = time.time() - start
    report(5, "higher-block recoding preserves complexity", True, f"{elapsed:.1f}s")


def test_criterion_6_synchronization():
    start = time.time()
    checked = 0
    for length in (1, 2, 3, 4):
        for u in itertools.product("ab", repeat=length):
            if not is_primitive(u):
                continue
            for m in (1, 2, 3):
                assert check_sync_delay(u, m, 6, alphabet="ab"), (u, m)
                checked += 1
    elapsed = time.time() - start
    report(6, "synchronization of primitive-word powers",
           checked == 66, f"{checked} cases, {elapsed:.1f}s")


def test_criterion_7_green_oracle_and_wreath_structure():
    start = time.time()
    done = 0
    seed = 100
    while done < 20:
        seed += 1
        S = random_transformation_semigroup(seed, 4, 2, cap=40)
        if S.n > 40:
            continue
        assert_green_matches_oracle(S)
        done += 1
    for G in (cyclic_group(2), cyclic_group(3)):
        for b in (1, 2, 3):
            partials = sorted(
                {
                    PartialTransformation(
                        tuple(t if d else None for d in dom), b
                    )
                    for dom in itertools.product([0, 1], repeat=b)
                    for t in range(b)
                },
                key=lambda t: tuple(-1 if v is None else v for v in t.mapping),
            )
            ws = wreath_product_0simple_check(G, partials)
            assert ws.kind == ("simple" if b == 1 and all(t.is_total() for t in partials) else "0-simple")
            totals = [PartialTransformation.constant(b, t) for t in range(b)]
            ws2 = wreath_product_0simple_check(G, totals)
            assert ws2.kind == "simple"
    elapsed = time.time() - start
    report(7, "Green oracle on 20 random semigroups; wreath structure lemma",
           True, f"{elapsed:.1f}s")


def test_criterion_8_lifting_conclusions():
    start = time.time()
    rng = random.Random(8)
    done = 0
    seed = 500
    while done < 10:
        seed += 1
        S = random_transformation_semigroup(seed, 4, 2, cap=40)
        if S.n > 40:
            continue
        phi, T = action_quotient(S, rng)
        if phi is None:
            continue
        gt = T.green()
        regs = [c for c in range(len(gt.j_classes)) if gt.regular[c]]
        lift_jclass(phi, rng.choice(regs))  # asserts conclusions (1)-(4)
        done += 1
    elapsed = time.time() - start
    report(8, "lifting conclusions on 10 random surjections", True, f"{elapsed:.1f}s")
