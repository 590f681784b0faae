"""Complexity functions and entropy of sofic shifts.

q(n) counts distinct factors of length n (dynamic programming on the minimal
DFA, so no double counting); entropy is log base 2 of the spectral radius of
the live-state adjacency matrix, cross-checked against the counting bounds
(1/n) log2 q(n), which decrease to the entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NotASubshift, ToleranceNotReached
from .shiftspace import factor_dfa


@dataclass
class ComplexityProfile:
    counts: tuple  # q(1) .. q(n_max)
    entropy_upper: float  # min over computed (1/n) log2 q(n)
    perron_estimate: float

    def q(self, n):
        return self.counts[n - 1]

    def counting_estimate(self):
        """Ratio-based estimate log2(q(n)/q(n-1)); 0 exactly when q stalls."""
        if len(self.counts) < 2 or self.counts[-1] == self.counts[-2]:
            return 0.0
        return math.log2(self.counts[-1] / self.counts[-2])


def complexity(P, n_max):
    assert 1 <= n_max <= 64
    P.require_irreducible()
    d = factor_dfa(P)
    counts = d.count_words(n_max)
    assert all(c > 0 for c in counts)
    for i in range(n_max):
        for j in range(n_max - i - 1):
            n, m = i + 1, j + 1
            assert counts[n + m - 1] <= counts[n - 1] * counts[m - 1], (
                f"submultiplicativity fails at ({n},{m})"
            )
    upper = min(math.log2(counts[n - 1]) / n for n in range(1, n_max + 1))
    perron = math.log2(_live_spectral_radius(d, tol=1e-12))
    assert upper >= perron - 1e-9, "counting bounds must dominate the entropy"
    return ComplexityProfile(tuple(counts), upper, perron)


def _live_adjacency(d):
    live = sorted(d.accepting)
    pos = {q: i for i, q in enumerate(live)}
    n = len(live)
    mat = [[0] * n for _ in range(n)]
    for q in live:
        for r in d.trans[q]:
            if r in pos:
                mat[pos[q]][pos[r]] += 1
    return mat


def _live_spectral_radius(d, tol):
    return spectral_radius(_live_adjacency(d), tol)


def spectral_radius(mat, tol=1e-9, max_iter=200000):
    """Spectral radius of a non-negative integer matrix.

    Tarjan decomposition into strongly connected components, then shifted
    power iteration per component with Collatz-Wielandt bracketing (the
    shift by the identity makes each irreducible block primitive).
    """
    n = len(mat)
    if n == 0:
        return 0.0
    comp = _scc_ids(mat)
    best = 0.0
    for cid in range(max(comp) + 1):
        nodes = [i for i in range(n) if comp[i] == cid]
        if len(nodes) == 1:
            i = nodes[0]
            best = max(best, float(mat[i][i]))
            continue
        sub = [[mat[i][j] for j in nodes] for i in nodes]
        best = max(best, _primitive_radius(sub, tol, max_iter))
    return best


def _scc_ids(mat):
    n = len(mat)
    adj = [[j for j in range(n) if mat[i][j]] for i in range(n)]
    index = [None] * n
    low = [0] * n
    onstack = [False] * n
    stack = []
    comp = [None] * n
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                onstack[v] = True
            advanced = False
            while pi < len(adj[v]):
                w = adj[v][pi]
                pi += 1
                if index[w] is None:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                elif onstack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            work.pop()
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return comp


def _primitive_radius(sub, tol, max_iter):
    n = len(sub)
    shifted = [[sub[i][j] + (1 if i == j else 0) for j in range(n)] for i in range(n)]
    x = [1.0] * n
    for _ in range(max_iter):
        y = [sum(shifted[i][j] * x[j] for j in range(n)) for i in range(n)]
        ratios = [y[i] / x[i] for i in range(n)]
        lo, hi = min(ratios), max(ratios)
        if hi - lo <= tol * hi:
            return (lo + hi) / 2.0 - 1.0
        norm = max(y)
        x = [v / norm for v in y]
    raise ToleranceNotReached((min(ratios) - 1.0, max(ratios) - 1.0))


@dataclass
class EntropyResult:
    value: float
    certificate: tuple  # (n, q(n), upper bound) rows
    counting: float

    def __float__(self):
        return self.value


def entropy_estimate(P, n_max=24, tol=1e-9):
    profile = complexity(P, n_max)
    d = factor_dfa(P)
    value = math.log2(_live_spectral_radius(d, tol))
    cert = tuple(
        (n, profile.q(n), math.log2(profile.q(n)) / n) for n in range(1, n_max + 1)
    )
    for _, _, ub in cert:
        assert ub >= value - 10 * tol
    return EntropyResult(value, cert, profile.counting_estimate())


def subshift_inclusion_witnesses(P, P_sub):
    """(missing, extra): a factor of the candidate subshift outside L(P),
    and a factor of P outside the candidate (None when none exists)."""
    d = factor_dfa(P)
    d_sub = factor_dfa(P_sub)
    missing = d_sub.difference_witness(d)
    extra = d.difference_witness(d_sub)
    return missing, extra


def entropy_gap_check(P, P_sub, tol=1e-6):
    """True iff L(P_sub) is strictly contained in L(P) and the entropies are
    separated by more than tol."""
    missing, extra = subshift_inclusion_witnesses(P, P_sub)
    if missing is not None:
        raise NotASubshift("candidate is not contained in the shift", missing)
    if extra is None:
        raise NotASubshift("inclusion is not strict")
    h = entropy_estimate(P).value
    h_sub = entropy_estimate(P_sub).value
    return h_sub < h - tol


def word_entropy(w):
    """Entropy of a finite word; zero by definition."""
    return 0.0
