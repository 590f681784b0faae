"""Syntactic semigroups of sofic factor languages and the AGGM machinery.

The syntactic semigroup is computed as the transition semigroup of the
minimal complete DFA of the factor language; a context-profile oracle is
provided for independent verification on small instances.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CheckFailed, NotAGGM, NotStronglyConnected
from .finsemi import (
    FiniteSemigroup,
    PartialTransformation,
    SemigroupMorphism,
    close_generators,
    lift_jclass,
)
from .shiftspace import Dfa, Presentation, factor_dfa


@dataclass
class SyntacticData:
    """Syntactic semigroup of L(X) together with the letter morphism.

    `alphabet` is the ambient alphabet X, which may strictly contain the
    letters occurring in the presentation (letters outside the shift map to
    zero)."""

    semigroup: FiniteSemigroup
    letter_map: dict
    dfa: Dfa
    source: Presentation
    zero: int  # element all non-factors map to; None when L(X) = X^+
    alphabet: tuple = None

    def image(self, w):
        """The syntactic morphism on a non-empty word."""
        w = tuple(w)
        cur = self.letter_map[w[0]]
        for a in w[1:]:
            cur = self.semigroup.mul(cur, self.letter_map[a])
        return cur

    def in_language(self, w):
        return self.image(w) != self.zero if self.zero is not None else True

    def distinguished_class(self):
        ok, j = is_aggm(self.semigroup)
        assert ok, "syntactic semigroup of an irreducible sofic shift must be AGGM"
        return j


def syntactic_semigroup(P, extra_letters=()):
    """Transition semigroup of the minimal complete DFA of L(X).

    `extra_letters` adjoins ambient letters that never occur in the shift;
    they map to the zero of the syntactic semigroup."""
    if not P.irreducible:
        raise NotStronglyConnected("presentation graph is not strongly connected")
    d = factor_dfa(P)
    if extra_letters:
        d = d.extend_alphabet(tuple(extra_letters))
    maps = [
        PartialTransformation([d.trans[q][j] for q in range(d.n_states)])
        for j in range(len(d.alphabet))
    ]
    S = close_generators(maps, cap=10 ** 6)
    letter_map = {a: S.generators[j] for j, a in enumerate(d.alphabet)}
    sink = d.dead_state()
    zero = None
    if sink is not None:
        zero = S.names.index(PartialTransformation.constant(d.n_states, sink))
        assert zero == S.zero
    return SyntacticData(S, letter_map, d, P, zero, tuple(d.alphabet))


def context_profile_classes(P, max_word_len, max_context_len):
    """Brute-force syntactic classes of words by two-sided context profiles.

    Membership goes through the presentation directly (path existence), so
    this is independent of the DFA pipeline.  Contexts include the empty
    word on either side.
    """
    alphabet = P.alphabet
    succ = {}
    for s, a, t in P.edges:
        succ.setdefault((s, a), set()).add(t)

    def members(w):
        cur = set(range(P.n_states))
        for a in w:
            cur = {t for s in cur for t in succ.get((s, a), ())}
            if not cur:
                return False
        return True

    def upto(n):
        acc = [()]
        frontier = [()]
        for _ in range(n):
            frontier = [w + (a,) for w in frontier for a in alphabet]
            acc.extend(frontier)
        return acc

    contexts = upto(max_context_len)
    profile = {}
    for x in upto(max_word_len):
        if not x:
            continue
        key = frozenset(
            (u, v) for u in contexts for v in contexts if members(u + x + v)
        )
        profile.setdefault(key, []).append(x)
    return list(profile.values())


def is_aggm(S):
    """Generalized group mapping with aperiodic distinguished ideal.

    Returns (flag, distinguished J-class elements or None).  A semigroup
    passes when it is trivial, or when it has a 0-minimal (or minimal)
    regular ideal on which it acts faithfully on both sides and whose
    non-zero part has only trivial H-classes.
    """
    if S.n == 1:
        return True, (0,)
    g = S.green()
    if S.zero is not None:
        zcls = g.j_class[S.zero]
        candidates = [
            c
            for c in range(len(g.j_classes))
            if c != zcls and g.j_below[c] == frozenset({c, zcls})
        ]
        ideals = [(c, set(g.j_classes[c]) | {S.zero}) for c in candidates]
    else:
        minimal = g.minimal_j_classes()
        assert len(minimal) == 1
        ideals = [(minimal[0], set(g.j_classes[minimal[0]]))]
    winners = []
    for c, ideal in ideals:
        if not g.regular[c]:
            continue
        if not _faithful_both_sides(S, ideal):
            continue
        if any(
            len(g.h_classes[g.h_class[x]]) != 1
            for x in g.j_classes[c]
        ):
            continue
        winners.append(c)
    if not winners:
        return False, None
    assert len(winners) == 1, "distinguished ideal must be unique"
    return True, tuple(g.j_classes[winners[0]])


def _faithful_both_sides(S, ideal):
    ideal = sorted(ideal)
    right = {}
    left = {}
    for s in range(S.n):
        right.setdefault(tuple(S.mul(x, s) for x in ideal), []).append(s)
        lr = S.left_row(s)
        left.setdefault(tuple(lr[x] for x in ideal), []).append(s)
    return all(len(v) == 1 for v in right.values()) and all(
        len(v) == 1 for v in left.values()
    )


def separating_contexts(S, j_elems):
    """The Rhodes criterion: elements are separated by J-class membership of
    two-sided translates into the distinguished class."""
    jset = set(j_elems)
    profiles = {}
    for s in range(S.n):
        key = frozenset(
            (x, y)
            for x in j_elems
            for y in j_elems
            if S.mul(S.mul(x, s), y) in jset
        )
        profiles.setdefault(key, []).append(s)
    return profiles


def aggm_forward_check(P):
    """Forward half of the equivalence: syntactic semigroups are AGGM."""
    D = syntactic_semigroup(P)
    ok, j = is_aggm(D.semigroup)
    if not ok:
        raise CheckFailed("syntactic semigroup is not AGGM")
    profiles = separating_contexts(D.semigroup, j)
    if any(len(v) != 1 for v in profiles.values()):
        bad = next(v for v in profiles.values() if len(v) != 1)
        raise CheckFailed("distinguished class fails to separate", bad[:2])
    return {
        "semigroup_size": D.semigroup.n,
        "is_aggm": True,
        "distinguished_class_size": len(j),
        "subgroup_trivial": True,
        "data": D,
        "jclass": j,
    }


def aggm_backward_check(S, alphabet=None):
    """Backward half: an AGGM semigroup is the syntactic semigroup of the
    factor language it defines.

    Checks, with witnesses: S \\ {0} is factorial and irreducible inside S
    (the algebraic criterion), every pair of distinct elements is separated
    by a context (r, s) in S^1, and the transition semigroup of the minimal
    DFA of the reconstructed language is generator-isomorphic to S.
    """
    ok, j = is_aggm(S)
    if not ok:
        raise NotAGGM("input semigroup is not AGGM")
    if alphabet is None:
        alphabet = tuple(chr(97 + i) for i in range(len(S.generators)))
    assert len(alphabet) == len(S.generators)
    if S.n == 1:
        dfa = Dfa([[0] * len(alphabet)], alphabet, 0, {0})
        return dfa, {"semigroup_size": 1, "is_aggm": True}

    zero = S.zero
    assert zero is not None, "non-trivial AGGM semigroup must have a zero"
    nonzero = [s for s in range(S.n) if s != zero]
    g = S.green()
    # factorial: factors of non-zero elements are non-zero
    for a in nonzero:
        for b in range(S.n):
            if g.leq_j(g.j_class[a], g.j_class[b]) and b == zero:
                raise CheckFailed("S minus zero is not factorial", (a, b))
    # irreducible: connecting elements exist inside S
    for u in nonzero:
        for v in nonzero:
            if all(S.mul(S.mul(u, w), v) == zero for w in range(S.n)):
                raise CheckFailed("S minus zero is not irreducible", (u, v))
    # syntactic minimality: contexts over S^1 separate distinct elements
    for m in nonzero + [zero]:
        for n_ in range(m + 1, S.n):
            if not _separated(S, zero, m, n_):
                raise CheckFailed("elements not separated by contexts", (m, n_))
    # language-level reconstruction: minimal DFA over S^1 states
    dfa = _language_dfa(S, alphabet).minimize()
    maps = [
        PartialTransformation([dfa.trans[q][j] for q in range(dfa.n_states)])
        for j in range(len(alphabet))
    ]
    T = close_generators(maps, cap=10 ** 6)
    iso = generator_isomorphic(S, T)
    if not iso:
        raise CheckFailed("reconstructed syntactic semigroup differs from input")
    return dfa, {
        "semigroup_size": S.n,
        "is_aggm": True,
        "distinguished_class_size": len(j),
    }


def _separated(S, zero, m, n_):
    ids = list(range(S.n)) + [None]  # None stands for the adjoined identity
    for r in ids:
        rm = m if r is None else S.mul(r, m)
        rn = n_ if r is None else S.mul(r, n_)
        for s in ids:
            rms = rm if s is None else S.mul(rm, s)
            rns = rn if s is None else S.mul(rn, s)
            if (rms == zero) != (rns == zero):
                return True
    return False


def _language_dfa(S, alphabet):
    """DFA over states S^1 accepting words with non-zero image."""
    n = S.n
    ident = n  # adjoined identity state
    trans = []
    for q in range(n):
        trans.append([S.mul(q, S.generators[j]) for j in range(len(alphabet))])
    trans.append([S.generators[j] for j in range(len(alphabet))])
    accepting = {q for q in range(n) if q != S.zero}
    return Dfa(trans, alphabet, ident, accepting)


def generator_isomorphic(S, T):
    """Isomorphism test for equally generated semigroups (generator i maps
    to generator i)."""
    if S.n != T.n or len(S.generators) != len(T.generators):
        return False
    try:
        m = SemigroupMorphism.from_generator_map(S, T, list(T.generators))
    except ValueError:
        return False
    return m.is_surjective()


def aggm_theorem_check(arg):
    """Run whichever direction of the equivalence matches the input type."""
    if isinstance(arg, Presentation):
        return aggm_forward_check(arg)
    if isinstance(arg, FiniteSemigroup):
        return aggm_backward_check(arg)
    raise TypeError("expected a Presentation or a FiniteSemigroup")


def fischer_cover(D):
    """Minimal right-resolving presentation, as the right-action graph on an
    R-class of the distinguished J-class."""
    S = D.semigroup
    alphabet = D.alphabet if D.alphabet is not None else tuple(sorted(D.letter_map))
    if S.n == 1:
        cover = Presentation(1, [(0, a, 0) for a in alphabet], alphabet)
        assert factor_dfa(cover).equivalent(D.dfa)
        return cover
    ok, j = is_aggm(S)
    if not ok:
        raise NotAGGM("Fischer cover needs an AGGM syntactic semigroup")
    cover = _schutzenberger_graph(S, j, D.letter_map)
    dfa_cover = factor_dfa(cover)
    assert dfa_cover.equivalent(D.dfa), "cover language differs from the source"
    return cover


def _schutzenberger_graph(S, j_elems, letter_map):
    g = S.green()
    e0 = min(x for x in j_elems if S.is_idempotent(x))
    r_id = g.r_class[e0]
    members = sorted(x for x in j_elems if g.r_class[x] == r_id)
    pos = {x: i for i, x in enumerate(members)}
    edges = []
    for x in members:
        for a, s in sorted(letter_map.items()):
            y = S.mul(x, s)
            if y in pos:
                edges.append((pos[x], a, pos[y]))
    # right-resolving by construction: the action is a partial function
    seen = set()
    for s, a, _ in edges:
        assert (s, a) not in seen
        seen.add((s, a))
    cover = Presentation(len(members), edges)
    assert cover.irreducible, "Schutzenberger graph must be strongly connected"
    return cover


def image_apex(psi, D):
    """Unique minimal J-class of psi's source mapping into the distinguished
    class of the syntactic semigroup (finite analogue of the lifting lemma)."""
    from .errors import NoCompatibleTriangle

    if psi.target is not D.semigroup and psi.target.table != D.semigroup.table:
        raise NoCompatibleTriangle("target is not the syntactic semigroup")
    if len(psi.source.generators) != len(psi.target.generators):
        raise NoCompatibleTriangle("generator counts differ")
    for i, gs in enumerate(psi.source.generators):
        if psi(gs) != psi.target.generators[i]:
            raise NoCompatibleTriangle(f"generator {i} not respected")
    if not psi.is_surjective():
        raise NoCompatibleTriangle("morphism is not surjective")
    j = D.distinguished_class()
    gt = D.semigroup.green()
    return lift_jclass(psi, gt.j_class[j[0]])
