"""Exact arithmetic in F_p and in SL2 / PSL2 / PGL2(F_p).

Matrices are 4-tuples (m11, m12, m21, m22) with entries reduced to
[0, p).  A PSL2 element is stored as its sign-canonical determinant-1
lift: the first nonzero entry in row-major order lies in [1, (p-1)/2].
PGL2 elements are matrices mod scalars, canonicalized by scaling the
first nonzero entry to 1; their determinant survives as a square /
non-square class.

Everything here is a pure function of its inputs; no interior mutation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .numutil import factorize, is_prime

Mat = tuple  # (m11, m12, m21, m22), entries in [0, p)


class NotConjugateError(ValueError):
    pass


class PrimeField:
    """The field F_p for an odd prime p >= 5."""

    def __init__(self, p: int):
        if p < 5 or not is_prime(p):
            raise ValueError(f"modulus must be a prime >= 5, got {p}")
        self.p = p
        self.half = (p - 1) // 2

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(x, self.p - 2, self.p)

    def legendre(self, x: int) -> int:
        """Legendre symbol of x: +1 square, -1 non-square, 0 zero.

        Euler's criterion (one exponentiation), so p is unbounded.
        """
        x %= self.p
        if x == 0:
            return 0
        r = pow(x, self.half, self.p)
        return 1 if r == 1 else -1

    def is_square(self, x: int) -> bool:
        return self.legendre(x) >= 0


# -- raw matrix helpers -------------------------------------------------

def mat_id() -> Mat:
    return (1, 0, 0, 1)


def mat_mul(F: PrimeField, A: Mat, B: Mat) -> Mat:
    p = F.p
    a, b, c, d = A
    e, f, g, h = B
    return ((a * e + b * g) % p, (a * f + b * h) % p,
            (c * e + d * g) % p, (c * f + d * h) % p)


def mat_inv(F: PrimeField, A: Mat) -> Mat:
    """Inverse of a determinant-1 matrix."""
    p = F.p
    a, b, c, d = A
    return (d, (-b) % p, (-c) % p, a)


def mat_neg(F: PrimeField, A: Mat) -> Mat:
    p = F.p
    return tuple((-x) % p for x in A)


def mat_det(F: PrimeField, A: Mat) -> int:
    return (A[0] * A[3] - A[1] * A[2]) % F.p


def mat_trace(F: PrimeField, A: Mat) -> int:
    return (A[0] + A[3]) % F.p


def mat_pow(F: PrimeField, A: Mat, n: int) -> Mat:
    if n < 0:
        return mat_pow(F, mat_inv(F, A), -n)
    out = mat_id()
    while n:
        if n & 1:
            out = mat_mul(F, out, A)
        A = mat_mul(F, A, A)
        n >>= 1
    return out


def is_scalar(F: PrimeField, A: Mat) -> bool:
    return A[1] == 0 and A[2] == 0 and A[0] == A[3]


def psl_canon(F: PrimeField, A: Mat) -> Mat:
    """Sign-canonical lift: first nonzero entry lies in [1, (p-1)/2]."""
    for x in A:
        if x != 0:
            if x > F.half:
                return mat_neg(F, A)
            return A
    raise ValueError("zero matrix has no canonical lift")


def pgl_canon(F: PrimeField, A: Mat) -> Mat:
    """Scale so the first nonzero entry equals 1 (PGL2 representative)."""
    for x in A:
        if x != 0:
            if x == 1:
                return A
            s = F.inv(x)
            p = F.p
            return tuple(v * s % p for v in A)
    raise ValueError("zero matrix is not a PGL2 element")


# -- PSL2 elements ------------------------------------------------------

class ElementClass(enum.Enum):
    IDENTITY = "identity"
    INVOLUTION = "involution"
    UNIPOTENT = "unipotent"
    SPLIT = "split"
    NONSPLIT = "nonsplit"


@dataclass(frozen=True)
class ProjMat2:
    """An element of PSL2(F_p) as its sign-canonical determinant-1 lift."""

    field: PrimeField
    m: Mat

    @classmethod
    def of(cls, F: PrimeField, entries) -> "ProjMat2":
        p = F.p
        m = tuple(int(x) % p for x in entries)
        if mat_det(F, m) != 1:
            raise ValueError(f"determinant is {mat_det(F, m)}, not 1")
        return cls(F, psl_canon(F, m))

    @classmethod
    def identity(cls, F: PrimeField) -> "ProjMat2":
        return cls(F, mat_id())

    def __mul__(self, other: "ProjMat2") -> "ProjMat2":
        return ProjMat2(self.field, psl_canon(self.field, mat_mul(self.field, self.m, other.m)))

    def inv(self) -> "ProjMat2":
        return ProjMat2(self.field, psl_canon(self.field, mat_inv(self.field, self.m)))

    def trace(self) -> int:
        """Trace of the canonical lift (one of the two signed traces)."""
        return mat_trace(self.field, self.m)

    def __pow__(self, n: int) -> "ProjMat2":
        return ProjMat2(self.field, psl_canon(self.field, mat_pow(self.field, self.m, n)))

    def is_one(self) -> bool:
        return is_scalar(self.field, self.m)

    def __repr__(self):
        a, b, c, d = self.m
        return f"[[{a},{b}],[{c},{d}]] mod {self.field.p}"


def classify(M: ProjMat2) -> ElementClass:
    """Conjugacy type of a PSL2 element, a total function of the trace."""
    F = M.field
    if M.is_one():
        return ElementClass.IDENTITY
    t = M.trace()
    disc = (t * t - 4) % F.p
    if t == 0:
        return ElementClass.INVOLUTION
    if disc == 0:
        return ElementClass.UNIPOTENT
    return ElementClass.SPLIT if F.legendre(disc) == 1 else ElementClass.NONSPLIT


def coarse_type(M: ProjMat2) -> ElementClass:
    """Split / non-split / unipotent trichotomy (involutions folded in
    by the sign of the discriminant; identity rejected)."""
    cls = classify(M)
    if cls is ElementClass.IDENTITY:
        raise ValueError("identity has no coarse type")
    if cls is ElementClass.INVOLUTION:
        disc = (-4) % M.field.p
        return ElementClass.SPLIT if M.field.legendre(disc) == 1 else ElementClass.NONSPLIT
    return cls


def centralizer_order(M: ProjMat2) -> int:
    """Order of the centralizer of M in PSL2(F_p) (cyclic for
    non-involutions; involutions and the identity are rejected)."""
    cls = classify(M)
    p = M.field.p
    if cls is ElementClass.UNIPOTENT:
        return p
    if cls is ElementClass.SPLIT:
        return (p - 1) // 2
    if cls is ElementClass.NONSPLIT:
        return (p + 1) // 2
    raise ValueError(f"no cyclic centralizer for {cls}")


def order(M: ProjMat2) -> int:
    """Least k >= 1 with M^k = 1 in PSL2(F_p).

    Computed by factoring the known centralizer order of the class and
    descending over prime divisors; no generic discrete log.
    """
    cls = classify(M)
    if cls is ElementClass.IDENTITY:
        return 1
    if cls is ElementClass.INVOLUTION:
        return 2
    F = M.field
    n = centralizer_order(M)
    for q in factorize(n):
        while n % q == 0 and is_scalar(F, mat_pow(F, M.m, n // q)):
            n //= q
    return n


def is_maximal(M: ProjMat2) -> bool:
    """Whether M generates its own centralizer in PSL2(F_p)."""
    cls = classify(M)
    if cls in (ElementClass.IDENTITY, ElementClass.INVOLUTION):
        raise ValueError(f"maximality undefined for {cls}")
    if cls is ElementClass.UNIPOTENT:
        return True  # centralizer has order p, generated by any nontrivial member
    return order(M) == centralizer_order(M)


# -- tori in PGL2 -------------------------------------------------------

def centralizer_pgl(M: ProjMat2):
    """The full torus centralizing M in PGL2(F_p).

    Returns a list of (matrix, det_class) with matrix a pgl-canonical
    tuple and det_class in {+1, -1}.  The torus is the unit group of
    F_p[M] mod scalars: projectively the pencil x*I + y*M, (x:y) in P^1,
    minus its singular members.  Size p-1 (split) or p+1 (non-split).
    """
    cls = classify(M)
    if cls not in (ElementClass.SPLIT, ElementClass.NONSPLIT):
        raise ValueError(f"centralizer enumeration unsupported for {cls}")
    F = M.field
    p = F.p
    a, b, c, d = M.m
    out = [(mat_id(), 1)]
    for x in range(p):
        g = ((x + a) % p, b, c, (x + d) % p)
        det = mat_det(F, g)
        if det == 0:
            continue
        out.append((pgl_canon(F, g), F.legendre(det)))
    expect = p - 1 if cls is ElementClass.SPLIT else p + 1
    assert len(out) == expect, (len(out), expect)
    return out


def centralizer_element_of_class(M: ProjMat2, det_class: int) -> Mat:
    """Some element of C_PGL2(M) with the requested determinant class."""
    if det_class == 1:
        return mat_id()
    F = M.field
    p = F.p
    a, b, c, d = M.m
    for x in range(p):
        g = ((x + a) % p, b, c, (x + d) % p)
        det = mat_det(F, g)
        if det and F.legendre(det) == det_class:
            return pgl_canon(F, g)
    raise ValueError("torus has no element of the requested class")


# -- conjugators via linear solves --------------------------------------

def _nullspace_mod_p(rows, p):
    """Basis of the right nullspace of a small matrix over F_p."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(vi - f * vr) % p for vi, vr in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for ri, pc in enumerate(pivots):
            v[pc] = (-rows[ri][fc]) % p
        basis.append(tuple(v))
    return basis


def _transporter_basis(F: PrimeField, M: Mat, N: Mat):
    """Basis of {g : g M = N g} as 4-vectors (g11, g12, g21, g22)."""
    p = F.p
    a, b, c, d = M
    e, f, g2, h = N
    # row-major coefficients of gM - Ng = 0 in the unknowns g11,g12,g21,g22
    rows = [
        ((a - e) % p, c % p, (-f) % p, 0),
        (b % p, (d - e) % p, 0, (-f) % p),
        ((-g2) % p, 0, (a - h) % p, c % p),
        (0, (-g2) % p, b % p, (d - h) % p),
    ]
    return _nullspace_mod_p(rows, p)


def _invertible_in_span(F: PrimeField, basis):
    """An invertible matrix in the span of the basis 4-vectors, or None."""
    p = F.p

    def as_mat(v):
        return (v[0] % p, v[1] % p, v[2] % p, v[3] % p)

    for v in basis:
        m = as_mat(v)
        if mat_det(F, m):
            return m
    # dim 2: det is a quadratic form, at most 2 singular lines, so any
    # three pairwise-independent directions include an invertible one.
    if len(basis) >= 2:
        b0, b1 = basis[0], basis[1]
        for lam in range(1, p):
            m = as_mat(tuple((x + lam * y) % p for x, y in zip(b0, b1)))
            if mat_det(F, m):
                return m
    if len(basis) > 2:
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                m = as_mat(tuple((x + y) % p for x, y in zip(basis[i], basis[j])))
                if mat_det(F, m):
                    return m
    return None


def conjugator(M: ProjMat2, N: ProjMat2):
    """A PGL2 element g with g M g^-1 = N at the PSL2 level.

    Returns (g, det_class) with g pgl-canonical.  Solves the linear
    system g M = +-N g over F_p and picks an invertible solution.
    """
    F = M.field
    for target in (N.m, mat_neg(F, N.m)):
        basis = _transporter_basis(F, M.m, target)
        if not basis:
            continue
        g = _invertible_in_span(F, basis)
        if g is not None:
            g = pgl_canon(F, g)
            return g, F.legendre(mat_det(F, g))
    raise NotConjugateError(f"{M} is not PGL2-conjugate to {N}")
