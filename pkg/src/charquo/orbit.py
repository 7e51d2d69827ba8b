"""BFS enumeration of the braid orbit of a quadruple in X^(2), with
deterministic point indexing and generator-permutation extraction.

The engine stores full matrix quadruples as numpy int64 arrays of shape
(n, 16) (four sign-canonical determinant-1 lifts, row-major) and
deduplicates on the packed canonical trace key.  In exact mode every
recurrent BFS edge is re-verified against the stored representative
with the centralizer-coset equivalence, so the enumeration is sound
even where the injectivity of the trace map is unproven; a genuine
trace-key collision between inequivalent points raises KeyCollisionError
(the OrbitIndex contract requires pairwise-distinct keys).

Indices are assigned by ascending canonical key after enumeration
closes, so reports are byte-reproducible regardless of traversal order.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from . import braidquandle as bq
from .charvar import FLIP_SIGNS, Params, from_quad, canonicalize
from .ffield import (NotConjugateError, ProjMat2, conjugator,
                     centralizer_element_of_class, mat_det, mat_mul, order,
                     pgl_canon)

LETTERS = (bq.S1, bq.S1i, bq.S2, bq.S2i, bq.S3, bq.S3i)
GENS = (bq.S1, bq.S2, bq.S3)

MAX_PACKED_PRIME = 509  # 7 base-p digits must fit in an int64


class OrbitError(RuntimeError):
    pass


class OrbitBudgetError(OrbitError):
    def __init__(self, message, partial_count):
        super().__init__(message)
        self.partial_count = partial_count


class KeyCollisionError(OrbitError):
    """Two inequivalent points share a canonical trace key (falsifies
    desk-scale injectivity of the trace map on this orbit)."""


class EpsilonOutsideOrbitError(OrbitError):
    """The reversal twist maps some orbit point outside the orbit; this
    would block the extension from B4 to the full automorphism action at
    this prime, so it is reported, never hidden."""


# -- vectorized 2x2 arithmetic (last axis = (m11, m12, m21, m22)) --------

def _mm(p, A, B):
    a, b, c, d = A[..., 0], A[..., 1], A[..., 2], A[..., 3]
    e, f, g, h = B[..., 0], B[..., 1], B[..., 2], B[..., 3]
    return np.stack(((a * e + b * g) % p, (a * f + b * h) % p,
                     (c * e + d * g) % p, (c * f + d * h) % p), axis=-1)


def _minv(p, A):
    """Inverse of determinant-1 matrices."""
    return np.stack((A[..., 3], (p - A[..., 1]) % p,
                     (p - A[..., 2]) % p, A[..., 0]), axis=-1)


def _tr(p, A):
    return (A[..., 0] + A[..., 3]) % p


def _psl_canon(p, A):
    """Flip signs so the first nonzero entry lies in [1, (p-1)/2]."""
    half = (p - 1) // 2
    first = np.argmax(A != 0, axis=-1)
    val = np.take_along_axis(A, first[..., None], axis=-1)[..., 0]
    return np.where((val > half)[..., None], (p - A) % p, A)


def _pgl_canon(p, A, inv_table):
    """Scale so the first nonzero entry equals 1."""
    first = np.argmax(A != 0, axis=-1)
    val = np.take_along_axis(A, first[..., None], axis=-1)[..., 0]
    return A * inv_table[val][..., None] % p


def _pack4(p, A):
    return ((A[..., 0] * p + A[..., 1]) * p + A[..., 2]) * p + A[..., 3]


_SIGNS = np.array(FLIP_SIGNS, dtype=np.int64)  # (8, 7)


def _quad_cols(arr):
    return arr[..., 0:4], arr[..., 4:8], arr[..., 8:12], arr[..., 12:16]


def fast_keys(p, quads):
    """Packed canonical trace key of each quadruple row."""
    A, B, C, D = _quad_cols(quads)
    m1 = _mm(p, _minv(p, B), A)
    m2 = _mm(p, _minv(p, A), C)
    m3 = _mm(p, _minv(p, D), C)
    m12 = _mm(p, m1, m2)
    t = np.stack((_tr(p, m1), _tr(p, m2), _tr(p, m3),
                  _tr(p, _mm(p, m2, m3)), _tr(p, _mm(p, m1, m3)),
                  _tr(p, m12), _tr(p, _mm(p, m12, m3))), axis=-1)
    flips = t[..., None, :] * _SIGNS % p  # (..., 8, 7)
    packed = flips[..., 0]
    for k in range(1, 7):
        packed = packed * p + flips[..., k]
    return packed.min(axis=-1)


def apply_letter_np(p, quads, letter):
    """One braid letter acting on an (n, 16) batch."""
    i, e = letter
    A, B, C, D = _quad_cols(quads)

    def tri(x, y):
        return _psl_canon(p, _mm(p, _mm(p, x, _minv(p, y)), x))

    if e == 1:
        if i == 1:
            parts = (tri(A, B), A, C, D)
        elif i == 2:
            parts = (A, tri(B, C), B, D)
        else:
            parts = (A, B, tri(C, D), C)
    else:
        if i == 1:
            parts = (B, tri(B, A), C, D)
        elif i == 2:
            parts = (A, C, tri(C, B), D)
        else:
            parts = (A, B, D, tri(D, C))
    return np.concatenate(parts, axis=-1)


def quad_to_row(Q):
    out = []
    for X in Q:
        out.extend(X.m)
    return np.array(out, dtype=np.int64)


def row_to_quad(F, row):
    return tuple(ProjMat2.of(F, tuple(int(v) for v in row[4 * k:4 * k + 4]))
                 for k in range(4))


# -- exact (centralizer-coset) equivalence, batched ----------------------

class _ExactChecker:
    """Batched test 'left * Q * dhat = R for some torus pair of equal
    determinant class', with dhat forced projectively by the A column.

    left_mats/left_classes enumerate the left coset acting on Q (the
    gamma centralizer, possibly pre-twisted); right_keys/right_classes
    describe the admissible dhat coset, packed and sorted.
    """

    def __init__(self, p, left_mats, left_classes, right_pairs, inv_table):
        self.p = p
        self.left = np.array(left_mats, dtype=np.int64)
        self.left_cls = np.array(left_classes, dtype=np.int64)
        rk = np.array([_pack4(p, np.array(m, dtype=np.int64)) for m, _ in right_pairs])
        rc = np.array([c for _, c in right_pairs], dtype=np.int64)
        srt = np.argsort(rk)
        self.right_keys = rk[srt]
        self.right_cls = rc[srt]
        self.inv_table = inv_table

    def equivalent(self, Qs, Rs):
        """Boolean mask over rows: Q_j ~ R_j."""
        p = self.p
        n = Qs.shape[0]
        found = np.zeros(n, dtype=bool)
        QA, QB, QC, QD = _quad_cols(Qs)
        RA = _pgl_canon(p, Rs[..., 0:4], self.inv_table)
        rest_R = [_pgl_canon(p, Rs[..., 4 * k:4 * k + 4], self.inv_table) for k in (1, 2, 3)]
        rest_Q = (QB, QC, QD)
        for L, lcls in zip(self.left, self.left_cls):
            todo = ~found
            if not todo.any():
                break
            ga = _mm(p, L[None, :], QA[todo])
            adj = np.stack((ga[..., 3], (p - ga[..., 1]) % p,
                            (p - ga[..., 2]) % p, ga[..., 0]), axis=-1)
            dh = _pgl_canon(p, _mm(p, adj, RA[todo]), self.inv_table)
            dkey = _pack4(p, dh)
            pos = np.searchsorted(self.right_keys, dkey)
            pos_ok = pos < len(self.right_keys)
            pos_c = np.where(pos_ok, pos, 0)
            hit = pos_ok & (self.right_keys[pos_c] == dkey) & (self.right_cls[pos_c] == lcls)
            if not hit.any():
                continue
            sub = np.flatnonzero(todo)[hit]
            dh_h = dh[hit]
            ok = np.ones(len(sub), dtype=bool)
            for qcol, rcol in zip(rest_Q, rest_R):
                lhs = _pgl_canon(p, _mm(p, _mm(p, L[None, :], qcol[sub]), dh_h), self.inv_table)
                ok &= (lhs == rcol[sub]).all(axis=-1)
            found[sub[ok]] = True
        return found


def _inv_table(p):
    t = np.zeros(p, dtype=np.int64)
    t[1:] = np.array([pow(i, p - 2, p) for i in range(1, p)], dtype=np.int64)
    return t


def make_checker(params: Params) -> _ExactChecker:
    p = params.F.p
    cg = params.centralizer("gamma")
    return _ExactChecker(p, [m for m, _ in cg], [c for _, c in cg],
                         params.centralizer("delta"), _inv_table(p))


# -- the orbit index ------------------------------------------------------

@dataclass
class OrbitIndex:
    params: Params
    points: np.ndarray  # (n, 16) int64, ascending key order
    keys: np.ndarray    # (n,) packed canonical trace keys, ascending
    exact_verified: bool
    edges_verified: int = 0
    _perm_cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return len(self.keys)

    @property
    def p(self) -> int:
        return self.params.F.p

    def point(self, i):
        return row_to_quad(self.params.F, self.points[i])

    def index_of_keys(self, keys):
        """Indices for an array of packed keys; -1 where absent."""
        pos = np.searchsorted(self.keys, keys)
        pos_ok = pos < self.n
        pos_c = np.where(pos_ok, pos, 0)
        good = pos_ok & (self.keys[pos_c] == keys)
        return np.where(good, pos_c, -1)

    def index_of_point(self, Q) -> int:
        key = canon_key_int(self.p, from_quad(Q))
        i = int(self.index_of_keys(np.array([key]))[0])
        if i < 0:
            raise OrbitError("point is not on the orbit")
        return i

    def letter_perm(self, letter) -> np.ndarray:
        """Index permutation of one braid letter."""
        if letter not in self._perm_cache:
            images = apply_letter_np(self.p, self.points, letter)
            idx = self.index_of_keys(fast_keys(self.p, images))
            if (idx < 0).any():
                raise OrbitError("orbit not closed: image key missing")
            self._perm_cache[letter] = idx
        return self._perm_cache[letter]

    def perm_of(self, word) -> np.ndarray:
        """Permutation of a braid word (leftmost letter applied first)."""
        out = np.arange(self.n, dtype=np.int64)
        for letter in word:
            out = self.letter_perm(letter)[out]
        return out

    def f2_perms(self):
        """Permutations of the free generators x = s1 s3^-1 and
        y = s2 x s2^-1."""
        x = self.perm_of([bq.S1, bq.S3i])
        y = self.perm_of([bq.S2, bq.S1, bq.S3i, bq.S2i])
        return x, y

    def sigma_matrix_traces(self, i: int):
        """Trace of the sigma_i matrix of every point, plus the mask of
        points where that matrix is the identity."""
        p = self.p
        A, B, C, D = _quad_cols(self.points)
        pair = {1: (A, B), 2: (B, C), 3: (C, D)}[i]
        m = _mm(p, pair[0], _minv(p, pair[1]))
        ident = ((m[:, 1] == 0) & (m[:, 2] == 0) & (m[:, 0] == m[:, 3]))
        return _tr(p, m), ident

    # -- dump format ------------------------------------------------------

    MAGIC = b"CHQO"
    VERSION = 1

    def write_dump(self, path):
        """Binary stream of the 7-tuple canonical keys: header (magic,
        version, p, n) then n*7 little-endian u64 scalars."""
        p = self.p
        coords = np.empty((self.n, 7), dtype="<u8")
        k = self.keys.copy()
        for j in range(6, -1, -1):
            coords[:, j] = k % p
            k //= p
        with open(path, "wb") as fh:
            fh.write(self.MAGIC)
            fh.write(struct.pack("<IQQ", self.VERSION, p, self.n))
            fh.write(coords.tobytes())


def read_dump(path):
    """Read an orbit dump; returns (p, array of shape (n, 7))."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != OrbitIndex.MAGIC:
            raise ValueError("not an orbit dump (bad magic)")
        version, p, n = struct.unpack("<IQQ", fh.read(20))
        if version != OrbitIndex.VERSION:
            raise ValueError(f"unsupported dump version {version}")
        coords = np.frombuffer(fh.read(n * 7 * 8), dtype="<u8").reshape(n, 7)
    return int(p), coords.astype(np.int64)


def canon_key_int(p, t) -> int:
    """Packed integer form of the canonical trace key."""
    out = 0
    for v in canonicalize(t, p):
        out = out * p + v
    return out


def _validate_start(P, params: Params):
    """(gamma(P), delta(P)) from the canonical lifts must equal
    (gamma, delta) up to one common sign."""
    F = params.F
    A, B, C, D = (X.m for X in P)
    gm = mat_mul(F, mat_mul(F, A, _inv4(F, B)), mat_mul(F, C, _inv4(F, D)))
    dm = mat_mul(F, mat_mul(F, _inv4(F, A), B), mat_mul(F, _inv4(F, C), D))
    p = F.p
    neg = lambda m: tuple((p - v) % p for v in m)
    pair = (gm, dm)
    if pair != (params.gamma_mat, params.delta_mat) and \
            pair != (neg(params.gamma_mat), neg(params.delta_mat)):
        raise ValueError("gamma mismatch: point does not lie in X for these parameters")


def _inv4(F, m):
    return (m[3], (-m[1]) % F.p, (-m[2]) % F.p, m[0])


def enumerate_orbit(P, params: Params, max_points=2_000_000,
                    exact_verify=None, frontier_shuffle_seed=None) -> OrbitIndex:
    """Closure of P under the six braid letters.

    exact_verify=None re-verifies recurrent edges exactly whenever both
    gamma and delta have order <= 60 (the regime where trace-key
    injectivity is unproven); True/False force the mode.
    """
    F = params.F
    p = F.p
    if p > MAX_PACKED_PRIME:
        raise OrbitBudgetError(f"p={p} exceeds the packed-key engine bound "
                               f"{MAX_PACKED_PRIME} (orbit would be ~p^4 points)", 0)
    _validate_start(P, params)
    if exact_verify is None:
        exact_verify = max(order(params.gamma), order(params.delta)) <= 60
    checker = make_checker(params) if exact_verify else None

    rng = None
    if frontier_shuffle_seed is not None:
        import random
        rng = random.Random(frontier_shuffle_seed)

    start = quad_to_row(P)[None, :]
    start_key = int(fast_keys(p, start)[0])
    pts = start.copy()
    key2idx = {start_key: 0}
    frontier = np.array([0], dtype=np.int64)
    edges_verified = 0

    while len(frontier):
        if rng is not None:
            idx = list(range(len(frontier)))
            rng.shuffle(idx)
            frontier = frontier[np.array(idx, dtype=np.int64)]
        batch = pts[frontier]
        images = np.concatenate([apply_letter_np(p, batch, L) for L in LETTERS])
        ikeys = fast_keys(p, images)

        order_ = np.argsort(ikeys, kind="stable")
        new_rows = []
        recurrent_rows = []
        recurrent_reps = []
        j = 0
        total = len(order_)
        n_now = len(pts)
        while j < total:
            r0 = order_[j]
            k = int(ikeys[r0])
            j2 = j
            while j2 < total and int(ikeys[order_[j2]]) == k:
                j2 += 1
            idx = key2idx.get(k)
            if idx is None:
                idx = n_now + len(new_rows)
                key2idx[k] = idx
                new_rows.append(r0)
                group = order_[j + 1:j2]
            else:
                group = order_[j:j2]
            if exact_verify and len(group):
                recurrent_rows.extend(int(g) for g in group)
                recurrent_reps.extend([idx] * len(group))
            j = j2

        if len(pts) + len(new_rows) > max_points:
            raise OrbitBudgetError(
                f"orbit exceeds max_points={max_points}", len(pts) + len(new_rows))

        if new_rows:
            pts = np.concatenate([pts, images[np.array(new_rows, dtype=np.int64)]])
        if exact_verify and recurrent_rows:
            rows = np.array(recurrent_rows, dtype=np.int64)
            reps = np.array(recurrent_reps, dtype=np.int64)
            ok = checker.equivalent(images[rows], pts[reps])
            edges_verified += len(rows)
            if not ok.all():
                bad = int(rows[~ok][0])
                raise KeyCollisionError(
                    "canonical trace key collision between inequivalent points "
                    f"(key {int(ikeys[bad])}); exact dedup falsified at p={p}")
        frontier = np.arange(n_now, len(pts), dtype=np.int64)

    keys_sorted = sorted(key2idx)
    keys = np.array(keys_sorted, dtype=np.int64)
    old_order = np.array([key2idx[k] for k in keys_sorted], dtype=np.int64)
    pts = pts[old_order]

    # soundness backstop: every representative satisfies the defining equations
    A, B, C, D = _quad_cols(pts)
    gam = _mm(p, _mm(p, A, _minv(p, B)), _mm(p, C, _minv(p, D)))
    del_ = _mm(p, _mm(p, _minv(p, A), B), _mm(p, _minv(p, C), D))
    gm = np.array(params.gamma_mat, dtype=np.int64)
    dm = np.array(params.delta_mat, dtype=np.int64)
    plus = (gam == gm).all(axis=1) & (del_ == dm).all(axis=1)
    minus = (gam == (p - gm) % p).all(axis=1) & (del_ == (p - dm) % p).all(axis=1)
    if not (plus | minus).all():
        raise OrbitError("internal error: representative violates the defining equations")

    return OrbitIndex(params, pts, keys, exact_verify, edges_verified)


# -- the reversal twist ---------------------------------------------------

def epsilon_conjugators(params: Params):
    """(g, h, det_class): g gamma^-1 g^-1 = gamma, h delta h^-1 = delta^-1,
    with equal determinant classes (adjusted through the gamma torus)."""
    g, cg = conjugator(params.gamma.inv(), params.gamma)
    h, ch = conjugator(params.delta, params.delta.inv())
    if cg != ch:
        F = params.F
        z = centralizer_element_of_class(params.gamma, -1)
        g = pgl_canon(F, mat_mul(F, z, g))
        cg = F.legendre(mat_det(F, g))
        if cg != ch:
            raise NotConjugateError("no class-compatible reversal conjugators")
    return g, h, cg


def epsilon_perm(orbit: OrbitIndex, params: Params) -> np.ndarray:
    """Index permutation of the reversal twist Q -> g eps(Q) h.

    The trace key of the image is independent of (g, h) (two-sided
    torus twists only flip lift signs), so the index map needs only the
    reversed quadruple; the conjugators are still required to exist
    with compatible classes, and in exact mode every image is verified
    against its representative through the twisted coset.
    """
    g, h, cls = epsilon_conjugators(params)
    p = orbit.p
    rev = np.concatenate([orbit.points[:, 12:16], orbit.points[:, 8:12],
                          orbit.points[:, 4:8], orbit.points[:, 0:4]], axis=-1)
    idx = orbit.index_of_keys(fast_keys(p, rev))
    if (idx < 0).any():
        raise EpsilonOutsideOrbitError(
            f"epsilon maps {int((idx < 0).sum())} points outside the orbit at p={p}")
    if orbit.exact_verified:
        F = params.F
        inv_table = _inv_table(p)
        cg = params.centralizer("gamma")
        left = [pgl_canon(F, mat_mul(F, m, g)) for m, _ in cg]
        right = [(pgl_canon(F, mat_mul(F, h, m)), c) for m, c in params.centralizer("delta")]
        checker = _ExactChecker(p, left, [c for _, c in cg], right, inv_table)
        ok = checker.equivalent(rev, orbit.points[idx])
        if not ok.all():
            raise EpsilonOutsideOrbitError(
                "epsilon image fails exact equivalence with its representative")
    return idx
