"""Exact dense linear algebra over Z[q^+-1, s^+-1].

Matrices are lists of rows of LaurentPoly2.  Elimination is one-step
fraction-free (Bareiss): every division is exact in the ring and
raises if not, so a wrong pivot chain cannot corrupt silently.
Kernels and solutions come out with a single common denominator (the
final pivot), which keeps downstream matrix products in the ring.
"""

from __future__ import annotations

from dataclasses import dataclass

from .laurent import ONE, ZERO, LaurentPoly2, RationalFn2


def mat_zero(m, n):
    return [[ZERO for _ in range(n)] for _ in range(m)]


def mat_identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    m, k = len(A), len(B)
    n = len(B[0]) if B else 0
    out = []
    for i in range(m):
        Ai = A[i]
        row = []
        for j in range(n):
            acc = ZERO
            for t in range(k):
                a = Ai[t]
                if a.terms:
                    b = B[t][j]
                    if b.terms:
                        acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[a * c for a in row] for row in A]


def mat_transpose(A):
    return [list(col) for col in zip(*A)]


def mat_map(A, f):
    return [[f(a) for a in row] for row in A]


def mat_eq(A, B):
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def mat_is_zero(A):
    return all(a.is_zero() for row in A for a in row)


def _pivot_row(rows, r, c):
    """Shortest nonzero candidate keeps the fill-in small."""
    best = None
    for i in range(r, len(rows)):
        t = len(rows[i][c].terms)
        if t and (best is None or t < len(rows[best][c].terms)):
            best = i
            if t == 1:
                break
    return best


def ff_echelon(A):
    """One-step fraction-free row echelon form.

    Returns (rows, pivots, last_pivot) with pivots the list of pivot
    columns; rows is a fresh matrix.
    """
    rows = [list(r) for r in A]
    m = len(rows)
    n = len(rows[0]) if m else 0
    prev = ONE
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        i = _pivot_row(rows, r, c)
        if i is None:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, m):
            head = rows[i][c]
            if head.terms:
                rows[i] = [
                    (rows[i][j] * piv - head * rows[r][j]).exact_div(prev)
                    for j in range(n)]
            else:
                # zero head: the Bareiss minor update degenerates to a
                # rescale, still divided exactly by the previous pivot
                rows[i] = [(e * piv).exact_div(prev) if e.terms else e
                           for e in rows[i]]
        prev = piv
        pivots.append(c)
        r += 1
    return rows, pivots, prev


def rank(A) -> int:
    return len(ff_echelon(A)[1])


def ff_jordan(A):
    """Fraction-free Gauss-Jordan: returns (rows, pivots, d) with the
    pivot entries all equal to d after full reduction, so a consistent
    system A x = b reads off x = row / d."""
    rows = [list(r) for r in A]
    m = len(rows)
    n = len(rows[0]) if m else 0
    prev = ONE
    pivots = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        i = _pivot_row(rows, r, c)
        if i is None:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        piv = rows[r][c]
        for i in range(m):
            if i == r:
                continue
            head = rows[i][c]
            if head.terms:
                rows[i] = [
                    (rows[i][j] * piv - head * rows[r][j]).exact_div(prev)
                    for j in range(n)]
            else:
                rows[i] = [(e * piv).exact_div(prev) if e.terms else e
                           for e in rows[i]]
        prev = piv
        pivots.append(c)
        r += 1
    return rows, pivots, prev


def nullspace(A, ncols=None):
    """Basis of the right kernel, content-stripped vectors over the ring.

    Fraction-free Gauss-Jordan leaves every pivot entry equal to the
    final pivot d, so the kernel vector of a free column f is read off
    in the ring: v[f] = d, v[pivot_k] = -row_k[f].  Free columns in
    ascending order give a deterministic basis."""
    rows, pivots, d = ff_jordan(A)
    n = len(A[0]) if A else (ncols or 0)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ZERO] * n
        vec[fc] = d
        for k, pc in enumerate(pivots):
            vec[pc] = -rows[k][fc]
        basis.append(_strip_vector(vec))
    return basis


def _strip_vector(vec):
    nonzero = [v for v in vec if v.terms]
    if not nonzero:
        return vec
    from math import gcd as igcd
    g = 0
    eq = es = None
    for v in nonzero:
        cg, ceq, ces = v.content()
        g = igcd(g, abs(cg))
        eq = ceq if eq is None else min(eq, ceq)
        es = ces if es is None else min(es, ces)
    lead = None
    for v in vec:
        if v.terms:
            lead = v.terms[max(v.terms)]
            break
    if lead < 0:
        g = -g
    mono = LaurentPoly2.monomial(g, eq, es)
    return [v.exact_div(mono) if v.terms else v for v in vec]


@dataclass
class ScaledMatrix:
    """A matrix over the fraction field as (num matrix, common den)."""

    num: list
    den: LaurentPoly2

    @classmethod
    def of_ring(cls, rows):
        return cls([list(r) for r in rows], ONE)

    @property
    def shape(self):
        return len(self.num), len(self.num[0]) if self.num else 0

    def __matmul__(self, other):
        return ScaledMatrix(mat_mul(self.num, other.num), self.den * other.den)

    def __eq__(self, other):
        if not isinstance(other, ScaledMatrix):
            return NotImplemented
        A = mat_scale(self.num, other.den)
        B = mat_scale(other.num, self.den)
        return mat_eq(A, B)

    def transpose(self):
        return ScaledMatrix(mat_transpose(self.num), self.den)

    def bar(self):
        return ScaledMatrix(mat_map(self.num, lambda x: x.bar()), self.den.bar())

    def entry(self, i, j) -> RationalFn2:
        return RationalFn2(self.num[i][j], self.den)

    def is_scalar(self) -> bool:
        m, n = self.shape
        if m != n:
            return False
        d = self.num[0][0]
        for i in range(m):
            for j in range(n):
                if i == j:
                    if self.num[i][j] != d:
                        return False
                elif self.num[i][j].terms:
                    return False
        return True

    def eval_mod(self, q0, s0, r):
        d = self.den.eval_mod(q0, s0, r)
        if d == 0:
            raise ZeroDivisionError("common denominator vanishes at the point")
        dinv = pow(d, r - 2, r)
        return [[e.eval_mod(q0, s0, r) * dinv % r for e in row] for row in self.num]


def solve_in_span(A, B) -> ScaledMatrix:
    """X with A X = B, A of full column rank; entries share one
    denominator (the final pivot).  Raises if B leaves the span.

    Fraction-free Gauss-Jordan on [A | B]; the result is verified by
    back-substitution (A num(X) = den(X) B) before returning.
    """
    m = len(A)
    k = len(A[0]) if A else 0
    jcols = len(B[0]) if B else 0
    aug = [list(ra) + list(rb) for ra, rb in zip(A, B)]
    rows, pivots, d = ff_jordan(aug)
    if len(pivots) != k or any(c >= k for c in pivots):
        raise ValueError("solve_in_span: matrix is rank-deficient or "
                         "the right side leaves the span")
    for i in range(len(pivots), m):
        if any(rows[i][j].terms for j in range(k, k + jcols)):
            raise ValueError("solve_in_span: inconsistent system")
    X = [[rows[r][k + j] for j in range(jcols)] for r in range(k)]
    out = ScaledMatrix(X, d)
    lhs = mat_mul(A, X)
    rhs = mat_scale(B, d)
    if not mat_eq(lhs, rhs):
        raise ArithmeticError("solve_in_span: verification failed")
    return out
