"""Permutation-group analysis: parity, transitivity, minimal block
systems, exact orders via stabilizer chains at small degree, and
one-sided Monte-Carlo recognition of giants (groups containing A_n).

Permutations are 0-based image arrays.  Composition is in diagram
order: mult(p, q) applies p first, then q.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import factorial

import numpy as np

from .numutil import is_prime


def id_perm(n):
    return list(range(n))


def is_id(p) -> bool:
    return all(i == j for i, j in enumerate(p))


def mult(p, q):
    """Apply p first, then q."""
    return [q[i] for i in p]


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return out


def power(p, k):
    n = len(p)
    if k < 0:
        return power(inverse(p), -k)
    out = id_perm(n)
    while k:
        if k & 1:
            out = mult(out, p)
        p = mult(p, p)
        k >>= 1
    return out


def check_perm(p, n=None):
    if n is not None and len(p) != n:
        raise ValueError(f"degree {len(p)} != {n}")
    seen = bytearray(len(p))
    for i in p:
        if i < 0 or i >= len(p) or seen[i]:
            raise ValueError("not a permutation")
        seen[i] = 1


def cycle_lengths(p):
    """Multiset of cycle lengths (including fixed points) as a sorted list."""
    n = len(p)
    seen = bytearray(n)
    out = []
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = 1
            j = p[j]
            length += 1
        out.append(length)
    out.sort()
    return out


def cycles(p):
    """Nontrivial cycles of p, each rotated to start at its minimum."""
    n = len(p)
    seen = bytearray(n)
    out = []
    for i in range(n):
        if seen[i] or p[i] == i:
            seen[i] = 1
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = 1
            cyc.append(j)
            j = p[j]
        out.append(cyc)
    return out


def fmt_cycles(p) -> str:
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cs)


def sign(p) -> int:
    """Parity via n minus the number of cycles."""
    return -1 if (len(p) - len(cycle_lengths(p))) % 2 else 1


def is_transitive(gens, n) -> bool:
    """BFS reachability from point 0 over the generators."""
    if n <= 1:
        return True
    if not gens:
        return False
    seen = bytearray(n)
    seen[0] = 1
    frontier = [0]
    count = 1
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = 1
                    count += 1
                    nxt.append(y)
        frontier = nxt
    return count == n


# -- stabilizer chains ---------------------------------------------------

@dataclass
class BSGS:
    """Base and strong generating set with basic orbit transversals."""

    base: list
    levels: list  # per level: (gens, orbit transversal {pt: perm base[i]->pt})
    order: int

    def contains(self, g) -> bool:
        h = list(g)
        for b, (gens, transversal) in zip(self.base, self.levels):
            img = h[b]
            if img not in transversal:
                return False
            h = mult(h, inverse(transversal[img]))
        return is_id(h)


class OracleBoundExceeded(ValueError):
    pass


def _orbit_transversal(point, gens, n):
    transversal = {point: id_perm(n)}
    frontier = [point]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g[x]
                if y not in transversal:
                    transversal[y] = mult(transversal[x], g)
                    nxt.append(y)
        frontier = nxt
    return transversal


def schreier_sims(gens, n=None, oracle_bound=5000) -> BSGS:
    """Deterministic Schreier-Sims; exact group order and membership.

    Restart-on-change variant: simple and exact, quadratic in the chain
    size, plenty for the oracle regime.  Refuses degrees above
    oracle_bound (transversal storage; giant recognition is the tool at
    that scale).
    """
    gens = [list(g) for g in gens if not is_id(g)]
    if n is None:
        n = len(gens[0]) if gens else 1
    if n > oracle_bound:
        raise OracleBoundExceeded(f"degree {n} exceeds oracle bound {oracle_bound}")
    for g in gens:
        check_perm(g, n)
    if not gens:
        return BSGS([], [], 1)

    base: list = []
    strong: list = []
    transversals: list = []

    def level_gens(i):
        return [g for g in strong if all(g[base[j]] == base[j] for j in range(i))]

    def rebuild():
        transversals.clear()
        for i in range(len(base)):
            transversals.append(_orbit_transversal(base[i], level_gens(i), n))

    def sift(h):
        for i in range(len(base)):
            img = h[base[i]]
            t = transversals[i]
            if img not in t:
                return h
            h = mult(h, inverse(t[img]))
        return None if is_id(h) else h

    def add_strong(g):
        if all(g[b] == b for b in base):
            for pt in range(n):
                if g[pt] != pt:
                    base.append(pt)
                    break
        strong.append(g)
        rebuild()

    for g in gens:
        add_strong(g)

    def find_new_strong():
        """A sifted Schreier generator outside the current chain, if any."""
        for i in range(len(base)):
            lg = level_gens(i)
            t = transversals[i]
            for pt, u in t.items():
                for s in lg:
                    us = mult(u, s)
                    g2 = mult(us, inverse(t[us[base[i]]]))
                    residue = sift(g2)
                    if residue is not None:
                        return residue
        return None

    while True:
        residue = find_new_strong()
        if residue is None:
            break
        add_strong(residue)

    order = 1
    levels = []
    for i in range(len(base)):
        order *= len(transversals[i])
        levels.append((level_gens(i), transversals[i]))
    return BSGS(base, levels, order)


# -- block systems -------------------------------------------------------

def minimal_block(gens, alpha, beta, n):
    """Finest block system whose block contains {alpha, beta}.

    Union-find refinement (Atkinson).  Returns the list of blocks as
    sorted tuples, or None when the only such system is the trivial
    one-block partition.
    """
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        if rx > ry:
            rx, ry = ry, rx
        parent[ry] = rx
        return True

    union(alpha, beta)
    queue = [(alpha, beta)]
    while queue:
        u, v = queue.pop()
        for g in gens:
            a, b = g[u], g[v]
            if union(a, b):
                queue.append((a, b))

    blocks: dict = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(i)
    if len(blocks) == 1:
        return None
    return sorted(tuple(b) for b in blocks.values())


# -- giant recognition ---------------------------------------------------

@dataclass
class GiantCertificate:
    """A sound witness that a transitive group contains A_n: a word in
    the generators whose permutation has a cycle of prime length q with
    n/2 < q < n - 2."""

    word: list  # [(generator index, +-1), ...]
    q: int
    n: int

    def permutation(self, gens):
        out = id_perm(self.n)
        for idx, e in self.word:
            g = gens[idx] if e == 1 else inverse(gens[idx])
            out = mult(out, g)
        return out

    def revalidate(self, gens) -> bool:
        if not is_prime(self.q) or not (2 * self.q > self.n and self.q < self.n - 2):
            return False
        return self.q in cycle_lengths(self.permutation(gens))


@dataclass
class Inconclusive:
    reason: str


def window_primes(n):
    """Primes q with n/2 < q < n - 2."""
    lo = n // 2 + 1
    return [q for q in range(lo, n - 2) if 2 * q > n and is_prime(q)]


def _random_word_perm(gens_np, inv_np, n, rng):
    # geometric length with mean ~60, capped; long words mix, short ones
    # keep the sample cheap
    length = 1
    while rng.random() > 1.0 / 60.0 and length < 400:
        length += 1
    word = [(rng.randrange(len(gens_np)), rng.choice((1, -1))) for _ in range(length)]
    cur = np.arange(n, dtype=np.int64)
    for idx, e in word:
        arr = gens_np[idx] if e == 1 else inv_np[idx]
        cur = arr[cur]
    return word, cur


def giant_certificate(gens, n, seed=0, budget=300):
    """Monte-Carlo search for a prime-cycle certificate.

    One-sided: returns a GiantCertificate on success, otherwise an
    Inconclusive (never a negative claim).
    """
    primes = set(window_primes(n))
    if not primes:
        return Inconclusive("n too small - use schreier_sims")
    if not is_transitive(gens, n):
        return Inconclusive("generators are not transitive")
    rng = random.Random(seed)
    gens_np = [np.asarray(g, dtype=np.int64) for g in gens]
    inv_np = [np.asarray(inverse(list(g)), dtype=np.int64) for g in gens]
    for _ in range(budget):
        word, arr = _random_word_perm(gens_np, inv_np, n, rng)
        for length in set(cycle_lengths(arr.tolist())):
            if length in primes:
                cert = GiantCertificate(word, length, n)
                assert cert.revalidate([list(g) for g in gens])
                return cert
    return Inconclusive(f"budget of {budget} random words exhausted")


@dataclass
class GiantClassification:
    kind: str  # "Alternating" | "Symmetric" | "Inconclusive"
    certificate: object = None  # GiantCertificate | None
    order: object = None  # exact order when the oracle ran
    reason: str = ""


def classify_giant(gens, n, seed=0, budget=300, oracle_bound=5000) -> GiantClassification:
    """Recognize the full alternating or symmetric group.

    Certificate path first (sound for any degree); exact stabilizer
    chain as the fallback oracle at small degree.
    """
    gens = [list(g) for g in gens]
    cert = giant_certificate(gens, n, seed=seed, budget=budget)
    if isinstance(cert, GiantCertificate):
        kind = "Alternating" if all(sign(g) == 1 for g in gens) else "Symmetric"
        return GiantClassification(kind, certificate=cert)
    if n <= oracle_bound:
        try:
            bsgs = schreier_sims(gens, n, oracle_bound=oracle_bound)
        except OracleBoundExceeded:
            return GiantClassification("Inconclusive", reason=cert.reason)
        if bsgs.order == factorial(n):
            return GiantClassification("Symmetric", order=bsgs.order)
        if 2 * bsgs.order == factorial(n):
            return GiantClassification("Alternating", order=bsgs.order)
        return GiantClassification("Inconclusive", order=bsgs.order,
                                   reason="exact order below giant size")
    return GiantClassification("Inconclusive", reason=cert.reason)
