"""Sofic shift presentations, factor-language DFAs, and recodings.

A presentation is a labeled directed graph; its factor language is the set
of non-empty label words of paths.  Words are tuples of letters (letters are
arbitrary strings, so higher-block alphabets fit the same machinery).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    NotPrimitive,
    NotStronglyConnected,
    ShiftIsMinimal,
)


def word(s):
    """Convenience: split a plain string into a letter tuple."""
    if isinstance(s, tuple):
        return s
    return tuple(s)


def join_word(w):
    return "".join(w) if all(len(a) == 1 for a in w) else ",".join(w)


def parse_word(s, alphabet):
    """Parse a word against an alphabet; comma-split for multi-char letters."""
    if "," in s:
        letters = tuple(s.split(","))
    elif all(len(a) == 1 for a in alphabet):
        letters = tuple(s)
    else:
        letters = (s,)
    for a in letters:
        if a not in alphabet:
            raise ValueError(f"letter {a!r} not in alphabet")
    return letters


def block_label(letters):
    """Name for an N-block used as a single letter of the recoded alphabet."""
    return "".join(letters) if all(len(a) == 1 for a in letters) else "|".join(letters)


class Presentation:
    """Labeled directed graph presenting a sofic shift."""

    def __init__(self, n_states, edges, alphabet=None):
        edges = [(int(s), str(a), int(t)) for (s, a, t) in edges]
        if not edges:
            raise ValueError("presentation needs at least one edge")
        used = []
        seen = set()
        for _, a, _ in edges:
            if a not in seen:
                seen.add(a)
                used.append(a)
        if alphabet is None:
            alphabet = sorted(seen)
        alphabet = tuple(alphabet)
        if set(alphabet) != seen:
            raise ValueError("alphabet must be exactly the set of edge labels")
        for s, _, t in edges:
            if not (0 <= s < n_states and 0 <= t < n_states):
                raise ValueError("edge endpoint out of range")
        self.n_states = n_states
        self.edges = tuple(edges)
        self.alphabet = alphabet
        self._irr = None

    @property
    def irreducible(self):
        if self._irr is None:
            self._irr = self._strongly_connected()
        return self._irr

    def _strongly_connected(self):
        n = self.n_states
        fwd = [[] for _ in range(n)]
        bwd = [[] for _ in range(n)]
        for s, _, t in self.edges:
            fwd[s].append(t)
            bwd[t].append(s)

        def reach(adj):
            seen = {0}
            stack = [0]
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            return seen

        return len(reach(fwd)) == n and len(reach(bwd)) == n

    def require_irreducible(self):
        if not self.irreducible:
            raise NotStronglyConnected("presentation graph is not strongly connected")

    def out(self, state, letter=None):
        for s, a, t in self.edges:
            if s == state and (letter is None or a == letter):
                yield (s, a, t)

    def __repr__(self):
        return f"Presentation(states={self.n_states}, edges={len(self.edges)})"


def parse_presentation(text):
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0][0] != "presentation":
        raise ValueError("expected 'presentation <#states> <letters...>' header")
    n = int(lines[0][1])
    alphabet = lines[0][2:]
    edges = []
    for parts in lines[1:]:
        if parts[0] != "edge" or len(parts) != 4:
            raise ValueError(f"bad edge line {' '.join(parts)}")
        edges.append((int(parts[1]), parts[2], int(parts[3])))
    return Presentation(n, edges, alphabet)


def format_presentation(P):
    out = [f"presentation {P.n_states} " + " ".join(P.alphabet)]
    for s, a, t in P.edges:
        out.append(f"edge {s} {a} {t}")
    return "\n".join(out) + "\n"


class Dfa:
    """Complete DFA; transitions indexed by (state, letter position)."""

    def __init__(self, trans, alphabet, initial, accepting):
        self.trans = tuple(tuple(row) for row in trans)
        self.alphabet = tuple(alphabet)
        self.letter_pos = {a: i for i, a in enumerate(self.alphabet)}
        self.initial = initial
        self.accepting = frozenset(accepting)
        self.n_states = len(self.trans)

    def step(self, q, letter):
        return self.trans[q][self.letter_pos[letter]]

    def run(self, w, start=None):
        q = self.initial if start is None else start
        for a in w:
            q = self.trans[q][self.letter_pos[a]]
        return q

    def accepts(self, w):
        """Membership for non-empty words (the empty word is out of scope)."""
        assert len(w) > 0
        return self.run(w) in self.accepting

    # -- structure -------------------------------------------------------

    def reachable(self):
        seen = {self.initial}
        stack = [self.initial]
        while stack:
            q = stack.pop()
            for r in self.trans[q]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    def coaccessible(self):
        """States from which some accepting state is reachable."""
        n = self.n_states
        rev = [[] for _ in range(n)]
        for q in range(n):
            for r in self.trans[q]:
                rev[r].append(q)
        seen = set(self.accepting)
        stack = list(self.accepting)
        while stack:
            q = stack.pop()
            for r in rev[q]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    def minimize(self):
        """Hopcroft partition refinement, then canonical BFS renumbering."""
        reach = sorted(self.reachable())
        idx = {q: i for i, q in enumerate(reach)}
        n = len(reach)
        k = len(self.alphabet)
        trans = [[idx[self.trans[q][a]] for a in range(k)] for q in reach]
        accepting = {idx[q] for q in self.accepting if q in idx}

        pre = [[[] for _ in range(n)] for _ in range(k)]
        for q in range(n):
            for a in range(k):
                pre[a][trans[q][a]].append(q)

        part = []
        block_of = [0] * n
        fin = sorted(accepting)
        nonfin = [q for q in range(n) if q not in accepting]
        for blk in (fin, nonfin):
            if blk:
                bid = len(part)
                part.append(set(blk))
                for q in blk:
                    block_of[q] = bid
        work = {(b, a) for b in range(len(part)) for a in range(k)}
        while work:
            b, a = work.pop()
            splitter = part[b]
            movers = {}
            for t in splitter:
                for q in pre[a][t]:
                    movers.setdefault(block_of[q], set()).add(q)
            for src, hit in movers.items():
                if len(hit) == len(part[src]):
                    continue
                new_id = len(part)
                part[src] -= hit
                part.append(hit)
                for q in hit:
                    block_of[q] = new_id
                for c in range(k):
                    if (src, c) in work:
                        work.add((new_id, c))
                    else:
                        small = src if len(part[src]) <= len(hit) else new_id
                        work.add((small, c))

        # canonical numbering: BFS from the initial block by letter order
        init_b = block_of[idx[self.initial]]
        renum = {init_b: 0}
        order = [init_b]
        head = 0
        while head < len(order):
            b = order[head]
            head += 1
            q = min(part[b])
            for a in range(k):
                nb = block_of[trans[q][a]]
                if nb not in renum:
                    renum[nb] = len(order)
                    order.append(nb)
        m = len(order)
        new_trans = [[0] * k for _ in range(m)]
        new_acc = set()
        for b, nb in renum.items():
            q = min(part[b])
            for a in range(k):
                new_trans[nb][a] = renum[block_of[trans[q][a]]]
            if q in accepting:
                new_acc.add(nb)
        return Dfa(new_trans, self.alphabet, 0, new_acc)

    def dead_state(self):
        for q in range(self.n_states):
            if q not in self.accepting and all(t == q for t in self.trans[q]):
                return q
        return None

    def extend_alphabet(self, letters):
        """Total extension: unknown letters go to a dead state (reused when
        one exists, so minimality is preserved)."""
        extra = [a for a in letters if a not in self.letter_pos]
        if not extra:
            return self
        alphabet = self.alphabet + tuple(extra)
        sink = self.dead_state()
        trans = [list(row) for row in self.trans]
        if sink is None:
            sink = self.n_states
            trans.append([sink] * len(self.alphabet))
        for row in trans:
            row.extend([sink] * len(extra))
        return Dfa(trans, alphabet, self.initial, self.accepting)

    def difference_witness(self, other):
        """Shortest non-empty word accepted by self but not other, or None."""
        letters = list(dict.fromkeys(self.alphabet + other.alphabet))
        a = self.extend_alphabet(letters)
        b = other.extend_alphabet(letters)
        start = (a.initial, b.initial)
        seen = {start}
        frontier = [(start, ())]
        while frontier:
            nxt = []
            for (p, q), w in frontier:
                for letter in letters:
                    p2, q2 = a.step(p, letter), b.step(q, letter)
                    w2 = w + (letter,)
                    if p2 in a.accepting and q2 not in b.accepting:
                        return w2
                    if (p2, q2) not in seen:
                        seen.add((p2, q2))
                        nxt.append(((p2, q2), w2))
            frontier = nxt
        return None

    def equivalent(self, other):
        return self.difference_witness(other) is None and other.difference_witness(self) is None

    def count_words(self, n_max):
        """[q(1), ..., q(n_max)]: accepted words per length."""
        vec = [0] * self.n_states
        vec[self.initial] = 1
        counts = []
        for _ in range(n_max):
            nxt = [0] * self.n_states
            for q, c in enumerate(vec):
                if c:
                    for r in self.trans[q]:
                        nxt[r] += c
            vec = nxt
            counts.append(sum(vec[q] for q in self.accepting))
        return counts

    def words_up_to(self, n_max):
        """All accepted words of length 1..n_max in shortlex order.

        Branches that cannot reach an accepting state within the remaining
        length are pruned, so the cost is proportional to the output."""
        reach = [[q in self.accepting for q in range(self.n_states)]]
        for _ in range(n_max):
            prev = reach[-1]
            reach.append(
                [any(prev[t] for t in self.trans[q]) for q in range(self.n_states)]
            )
        useful = [
            [any(reach[r][q] for r in range(rem + 1)) for q in range(self.n_states)]
            for rem in range(n_max + 1)
        ]
        out = []
        frontier = [((), self.initial)]
        for depth in range(n_max):
            rem = n_max - depth - 1
            nxt = []
            for w, q in frontier:
                for a in self.alphabet:
                    r = self.step(q, a)
                    if not useful[rem][r]:
                        continue
                    w2 = w + (a,)
                    nxt.append((w2, r))
                    if r in self.accepting:
                        out.append(w2)
            frontier = nxt
        return out

    def iter_words(self):
        """Lazy shortlex enumeration of the accepted language."""
        reach_acc = [[q in self.accepting for q in range(self.n_states)]]

        def ensure(r):
            while len(reach_acc) <= r:
                prev = reach_acc[-1]
                reach_acc.append(
                    [any(prev[t] for t in self.trans[q]) for q in range(self.n_states)]
                )

        length = 1
        gap = 0
        while True:
            ensure(length)
            if not reach_acc[length][self.initial]:
                gap += 1
                if gap > self.n_states:
                    return  # no longer words exist past a full pump window
                length += 1
                continue
            gap = 0
            out = []

            def walk(prefix, q, remaining):
                if remaining == 0:
                    out.append(prefix)
                    return
                for a in self.alphabet:
                    r = self.step(q, a)
                    if reach_acc[remaining - 1][r]:
                        walk(prefix + (a,), r, remaining - 1)

            walk((), self.initial, length)
            yield from out
            length += 1


def subset_construction(P, initial_set, accept_pred):
    """Deterministic powerset automaton of a presentation."""
    start = frozenset(initial_set)
    index = {start: 0}
    order = [start]
    trans = []
    head = 0
    while head < len(order):
        cur = order[head]
        head += 1
        row = []
        for a in P.alphabet:
            nxt = frozenset(t for (s, lab, t) in P.edges if lab == a and s in cur)
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
            row.append(index[nxt])
        trans.append(row)
    accepting = {i for i, sub in enumerate(order) if accept_pred(sub)}
    return Dfa(trans, P.alphabet, 0, accepting)


def factor_dfa(P):
    """Minimal complete DFA of the factor language of an irreducible presentation."""
    P.require_irreducible()
    d = subset_construction(P, range(P.n_states), lambda sub: len(sub) > 0)
    return d.minimize()


@dataclass(frozen=True)
class BiInfinitePoint:
    """Periodic bi-infinite point given by its primitive period word."""

    period: tuple

    def __post_init__(self):
        w = self.period
        assert len(w) > 0
        if not is_primitive(w):
            raise NotPrimitive(f"{join_word(w)} is a proper power")
        object.__setattr__(self, "period", least_rotation(w))

    def __repr__(self):
        return f"BiInfinitePoint({join_word(self.period)})"


def is_primitive(w):
    n = len(w)
    for d in range(1, n):
        if n % d == 0 and tuple(w) == tuple(w[:d]) * (n // d):
            return False
    return True


def least_rotation(w):
    w = tuple(w)
    return min(w[i:] + w[:i] for i in range(len(w)))


def rotations(w):
    w = tuple(w)
    return {w[i:] + w[:i] for i in range(len(w))}


def periodic_factors(u, n):
    """Distinct length-n factors of the periodic point with period u."""
    s = tuple(u) * (n // len(u) + 2)
    return {s[i:i + n] for i in range(len(u))}


def is_periodic(P):
    """Period word of the shift if it is a single periodic orbit, else None.

    Decided by eventual constancy of the complexity function: a stall
    q(n) = q(n+1) forces every length-n factor to extend uniquely, which for
    an irreducible shift means one finite orbit.
    """
    P.require_irreducible()
    d = factor_dfa(P)
    horizon = 2 * d.n_states + 2
    q = d.count_words(horizon)
    stall = None
    for i in range(len(q) - 1):
        if q[i] == q[i + 1]:
            stall = i + 1  # q(stall) == q(stall+1), 1-based
            break
    if stall is None:
        return None
    c = q[stall - 1]
    assert q[-1] == c, "complexity stalled but grew again"
    # extract the period from any window of length 2c
    sample = next(w for w in d.words_up_to(2 * c) if len(w) == 2 * c)
    assert sample[:c] == sample[c:], "periodic window failed to repeat"
    point = BiInfinitePoint(sample[:c])
    u = point.period
    # confirm against factor enumeration up to 3|u|
    upto = 3 * len(u)
    lang = {w for w in d.words_up_to(upto)}
    expect = set()
    for n in range(1, upto + 1):
        expect |= periodic_factors(u, n)
    assert lang == expect, "extracted period does not match the factor language"
    return point


def higher_block(P, N):
    """Presentation of the N-th higher block shift (conjugate recoding).

    States are paths of N-1 edges; each length-N path contributes one edge
    labeled by the block it reads, so consecutive blocks overlap in N-1
    letters.
    """
    P.require_irreducible()
    assert N >= 1
    if N == 1:
        return Presentation(P.n_states, P.edges, P.alphabet)
    paths = [(e,) for e in range(len(P.edges))]
    for _ in range(N - 2):
        paths = [
            p + (f,)
            for p in paths
            for f in range(len(P.edges))
            if P.edges[p[-1]][2] == P.edges[f][0]
        ]
    paths.sort()
    state_of = {p: i for i, p in enumerate(paths)}
    edges = []
    for p in paths:
        for f in range(len(P.edges)):
            if P.edges[p[-1]][2] == P.edges[f][0]:
                q = p[1:] + (f,)
                letters = tuple(P.edges[e][1] for e in p + (f,))
                edges.append((state_of[p], block_label(letters), state_of[q]))
    pos = {a: i for i, a in enumerate(P.alphabet)}
    labels = sorted(
        {lab for _, lab, _ in edges},
        key=lambda lab: tuple(pos[a] for a in _split_block(lab, P.alphabet)),
    )
    return Presentation(len(paths), edges, labels)


def _split_block(label, alphabet):
    if "|" in label:
        return tuple(label.split("|"))
    return tuple(label)


def non_minimal_witness(P):
    """A pair (w, v): w^+ in L(X), |v| = |w|, v in L(X), v not a rotation of w.

    w is the shortest lex-least cycle word at an accepting state of the
    minimal DFA; v is the lex-least non-rotation factor of the same length
    (one exists because a non-periodic shift has q(n) > n).
    """
    P.require_irreducible()
    if is_periodic(P) is not None:
        raise ShiftIsMinimal("shift is periodic, no witness exists")
    d = factor_dfa(P)
    w = None
    length = 1
    while w is None:
        for cand in _words_of_length(d.alphabet, length):
            if any(d.run(cand, start=q) == q for q in sorted(d.accepting)):
                w = cand
                break
        length += 1
    rot = rotations(w)
    v = None
    for cand in _words_of_length(d.alphabet, len(w)):
        if cand not in rot and d.accepts(cand):
            v = cand
            break
    assert v is not None
    # postconditions, asserted directly
    assert d.accepts(w) and d.accepts(v)
    assert all(d.accepts(w * m) for m in range(1, 4))
    assert len(v) == len(w) and v not in rotations(w)
    return w, v


def _words_of_length(alphabet, n):
    if n == 0:
        yield ()
        return
    for rest in _words_of_length(alphabet, n - 1):
        for a in alphabet:
            yield rest + (a,)


def conjugate_with_partial_alphabet(P):
    """Recode to X^[N] so some block word z has z^+ in the language but
    alph(z) is a proper subset of the recoded alphabet."""
    w, v = non_minimal_witness(P)
    n = len(w)
    P2 = higher_block(P, n)
    z = tuple(block_label(w[i:] + w[:i]) for i in range(n))
    for lab in z:
        assert lab in P2.alphabet
    d2 = factor_dfa(P2)
    zz = tuple(x for x in z)
    assert any(d2.run(zz, start=q) == q for q in d2.accepting), "z^+ not in L"
    v_lab = block_label(v)
    assert v_lab in P2.alphabet and v_lab not in set(z)
    assert set(z) < set(P2.alphabet)
    return P2, z


def check_sync_delay(u, m, bound, alphabet=None):
    """Brute-force the synchronization property of powers of a primitive word:
    x u^m y lands in u^+ exactly when x and y are powers of u."""
    u = word(u)
    if not is_primitive(u):
        raise NotPrimitive(join_word(u))
    assert m >= 1
    if alphabet is None:
        alphabet = sorted(set(u))
    core = u * m

    def in_u_star(w):
        return len(w) % len(u) == 0 and w == u * (len(w) // len(u))

    contexts = [()]
    for n in range(1, bound + 1):
        contexts.extend(_words_of_length(tuple(alphabet), n))
    for x in contexts:
        for y in contexts:
            full = x + core + y
            lhs = in_u_star(full)  # non-empty by construction, so u^+ = u^* here
            rhs = in_u_star(x) and in_u_star(y)
            if lhs != rhs:
                return False
    return True
