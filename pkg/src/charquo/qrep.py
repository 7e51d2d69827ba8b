"""Braid-group representations on highest-weight spaces of the integral
quantum group, exact over Z[q^+-1, s^+-1], with specialization to
finite fields.

The module V has basis (v_j) with K v_j = s q^-2j v_j, E v_j = v_{j-1}
and divided powers F^(n); the braid generator sigma_i acts on the n-fold
tensor power through the R-matrix on factors (i, i+1).  The weight
space of tensors with index sum l is V_{n,l}; the highest-weight space
W_{n,l} = ker(E) inside it carries the representation, of dimension
binom(n+l-2, l).
"""

from __future__ import annotations

from dataclasses import dataclass

from .laurent import (ONE, ZERO, LaurentPoly2, RationalFn2, qbinom, qfact,
                      qs_monomial)
from .numutil import binom, is_prime
from .qlinalg import (ScaledMatrix, mat_eq, mat_identity, mat_mul,
                      mat_transpose, nullspace, rank, solve_in_span)


class BadSpecializationError(ValueError):
    def __init__(self, message, entry=None):
        super().__init__(message)
        self.entry = entry


# -- weight bases -----------------------------------------------------------

def compositions(n: int, ell: int):
    """All (a_1..a_n) with a_i >= 0 summing to ell, in lexicographic order."""
    if n == 0:
        return [()] if ell == 0 else []
    if n == 1:
        return [(ell,)]
    out = []
    for a in range(ell + 1):
        for rest in compositions(n - 1, ell - a):
            out.append((a,) + rest)
    out.sort()
    return out


def weight_dim(n, ell):
    return binom(n + ell - 1, ell)


def hw_dim(n, ell):
    return binom(n + ell - 2, ell)


# -- the R-matrix ------------------------------------------------------------

def _torus_factor(k_lo: int, count: int, j: int) -> LaurentPoly2:
    """prod_{k=k_lo}^{k_lo+count-1} (s q^(-k-j) - s^-1 q^(k+j))."""
    out = ONE
    for k in range(k_lo, k_lo + count):
        out = out * (qs_monomial(-k - j, 1) - qs_monomial(k + j, -1))
    return out


def r_matrix(i: int, j: int):
    """R(v_i (x) v_j) as [((j+k, i-k), coefficient)] for k = 0..i."""
    out = []
    for k in range(i + 1):
        coeff = qs_monomial(2 * (i - k) * (j + k) + k * (k - 1) // 2, -i - j)
        coeff = coeff * qbinom(k + j, j) * _torus_factor(0, k, j)
        out.append(((j + k, i - k), coeff))
    return out


def sigma_on_V(n: int, ell: int, i: int):
    """Matrix of sigma_i on the weight space V_{n, ell} (columns act)."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} out of range for B_{n}")
    comps = compositions(n, ell)
    index = {c: k for k, c in enumerate(comps)}
    D = len(comps)
    M = [[ZERO for _ in range(D)] for _ in range(D)]
    pos = i - 1
    for col, a in enumerate(comps):
        for (t1, t2), coeff in r_matrix(a[pos], a[pos + 1]):
            b = a[:pos] + (t1, t2) + a[pos + 2:]
            M[index[b]][col] = M[index[b]][col] + coeff
    return M


def _r_block(m: int):
    """R restricted to span{v_x (x) v_{m-x}} in the basis x = 0..m."""
    M = [[ZERO for _ in range(m + 1)] for _ in range(m + 1)]
    for x in range(m + 1):
        for (t1, t2), coeff in r_matrix(x, m - x):
            M[t1][x] = M[t1][x] + coeff  # row index by first output factor
    return M


def sigma_inv_on_V(n: int, ell: int, i: int) -> ScaledMatrix:
    """sigma_i^-1 on V_{n, ell}: the R-matrix blocks inverted exactly."""
    blocks = {}
    den = ONE
    for m in range(ell + 1):
        inv = solve_in_span(_r_block(m), mat_identity(m + 1))
        blocks[m] = inv
        den = den * inv.den
    comps = compositions(n, ell)
    index = {c: k for k, c in enumerate(comps)}
    D = len(comps)
    num = [[ZERO for _ in range(D)] for _ in range(D)]
    pos = i - 1
    for col, a in enumerate(comps):
        m = a[pos] + a[pos + 1]
        inv = blocks[m]
        scale = den.exact_div(inv.den)
        x = a[pos]
        for t1 in range(m + 1):
            entry = inv.num[t1][x]
            if entry.terms:
                b = a[:pos] + (t1, m - t1) + a[pos + 2:]
                num[index[b]][col] = entry * scale
    return ScaledMatrix(num, den)


# -- quantum-group operators -------------------------------------------------

def e_matrix(n: int, ell: int):
    """E: V_{n, ell} -> V_{n, ell-1} through the iterated coproduct."""
    rows = compositions(n, ell - 1) if ell >= 1 else []
    cols = compositions(n, ell)
    index = {c: k for k, c in enumerate(rows)}
    M = [[ZERO for _ in cols] for _ in rows]
    for col, a in enumerate(cols):
        for pos in range(n):
            if a[pos] == 0:
                continue
            b = a[:pos] + (a[pos] - 1,) + a[pos + 1:]
            tail = sum(a[pos + 1:])
            coeff = qs_monomial(-2 * tail, n - 1 - pos)
            M[index[b]][col] = M[index[b]][col] + coeff
    return M


def highest_weight_basis(n: int, ell: int):
    """Basis of W_{n, ell} = ker(E) as V-coordinate vectors over the ring,
    content-stripped; dimension binom(n+ell-2, ell) or an internal error."""
    if n < 2 or ell < 0:
        raise ValueError("need n >= 2, ell >= 0")
    D = weight_dim(n, ell)
    E = e_matrix(n, ell)
    if not E:
        basis = [[ONE if k == j else ZERO for k in range(D)] for j in range(D)]
    else:
        basis = nullspace(E)
    if len(basis) != hw_dim(n, ell):
        raise ArithmeticError(
            f"kernel dimension {len(basis)} != binom({n + ell - 2},{ell})")
    for vec in basis:
        img = mat_mul(E, [[v] for v in vec]) if E else []
        assert all(e.is_zero() for row in img for e in row)
    return basis


# -- the representation -------------------------------------------------------

@dataclass
class RepMatrices:
    n: int
    ell: int
    dim: int
    basis: list          # W basis vectors as V-coordinates over the ring
    basis_matrix: list   # V-dim x dim, columns are the basis vectors
    sigma: dict          # generator index -> ScaledMatrix on the W basis


def braid_relations_hold(sigma: dict, n: int) -> bool:
    """Exact check of all defining relations among the given matrices."""
    for i in range(1, n - 1):
        a, b = sigma[i], sigma[i + 1]
        ab = a @ b
        if not (ab @ a == b @ ab):
            return False
    for i in range(1, n):
        for j in range(i + 2, n):
            if not (sigma[i] @ sigma[j] == sigma[j] @ sigma[i]):
                return False
    return True


def braid_matrices(n: int, ell: int) -> RepMatrices:
    """The braid representation on W_{n, ell}; relations verified exactly
    before returning."""
    basis = highest_weight_basis(n, ell)
    d = len(basis)
    A = mat_transpose(basis)  # V-dim x d
    sigma = {}
    for i in range(1, n):
        S = sigma_on_V(n, ell, i)
        B = mat_mul(S, A)
        sigma[i] = solve_in_span(A, B)
    if not braid_relations_hold(sigma, n):
        raise ArithmeticError(f"braid relations fail on W_{n},{ell}")
    return RepMatrices(n, ell, d, basis, A, sigma)


def w2_eigenvalue(ell: int) -> RationalFn2:
    """The scalar by which sigma_1 acts on the one-dimensional W_{2, ell}."""
    mats = braid_matrices(2, ell)
    return mats.sigma[1].entry(0, 0)


def expected_w2_eigenvalue(ell: int) -> RationalFn2:
    return RationalFn2(qs_monomial(ell * (ell - 1), -2 * ell,
                                   -1 if ell % 2 else 1))


def yang_baxter_on_v(ell: int) -> bool:
    """(R x 1)(1 x R)(R x 1) = (1 x R)(R x 1)(1 x R) on V_{3, ell}, exact."""
    s1 = sigma_on_V(3, ell, 1)
    s2 = sigma_on_V(3, ell, 2)
    lhs = mat_mul(mat_mul(s1, s2), s1)
    rhs = mat_mul(mat_mul(s2, s1), s2)
    return mat_eq(lhs, rhs)


def e_commutes_with_braiding(n: int, ell: int) -> bool:
    """The two actions commute: E sigma_i = sigma_i E on V_{n, ell}."""
    if ell == 0:
        return True
    E = e_matrix(n, ell)
    for i in range(1, n):
        upper = sigma_on_V(n, ell, i)
        lower = sigma_on_V(n, ell - 1, i)
        if not mat_eq(mat_mul(E, upper), mat_mul(lower, E)):
            return False
    return True


def decomposition_check(n: int, ell: int) -> bool:
    """Dimension bookkeeping of the restriction to the braid subgroup on
    strands 2..n, plus the first-index filtration realizing it.

    G_j = vectors of W_{n, ell} supported on first tensor index <= j is
    invariant under sigma_2..sigma_{n-1} (they do not touch the first
    factor); its dimension must be sum over the top j+1 summand
    dimensions, dim G_j = sum_{t = ell-j}^{ell} binom(n-3+t, t), which
    stacks up to the claimed direct-sum decomposition.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if hw_dim(n, ell) != sum(binom(n + k - 3, k) for k in range(ell + 1)):
        return False
    comps = compositions(n, ell)
    basis = highest_weight_basis(n, ell)
    d = len(basis)
    A = mat_transpose(basis)
    for j in range(ell + 1):
        high_rows = [A[r] for r, c in enumerate(comps) if c[0] > j]
        dim_gj = d - rank(high_rows) if high_rows else d
        if dim_gj != sum(binom(n - 3 + t, t) for t in range(ell - j, ell + 1)):
            return False
        # invariance: members of G_j keep first index <= j under sigma_i>=2
        kern = nullspace(high_rows, ncols=d) if high_rows else \
            [[ONE if t == m else ZERO for t in range(d)] for m in range(d)]
        if len(kern) != dim_gj:
            return False
        for coeffs in kern:
            vec = mat_mul(A, [[c] for c in coeffs])
            for i in range(2, n):
                img = mat_mul(sigma_on_V(n, ell, i), vec)
                for r, c in enumerate(comps):
                    if c[0] > j and img[r][0].terms:
                        return False
    return True


def qbinom_product_identity(t: int) -> bool:
    """sum_m [t m]_q x^m = prod_{k=0}^{t-1} (x + q^(1-t+2k)), expanded in
    an auxiliary variable, plus the alternating-sum consequence."""
    lhs = [qbinom(t, m) for m in range(t + 1)]
    rhs = [ONE]
    for k in range(t):
        mono = qs_monomial(1 - t + 2 * k, 0)
        new = [rhs[0] * mono]
        for m in range(1, len(rhs)):
            new.append(rhs[m - 1] + rhs[m] * mono)
        new.append(ONE)
        rhs = new
    if len(lhs) != len(rhs) or any(a != b for a, b in zip(lhs, rhs)):
        return False
    if t >= 1:
        acc = ZERO
        for m in range(t + 1):
            term = qbinom(t, m).shift(m * (1 - t), 0)
            acc = acc + (term if m % 2 == 0 else -term)
        if not acc.is_zero():
            return False
    return True


# -- the hermitian form -------------------------------------------------------

def h_value(m: int) -> RationalFn2:
    """(v_m, v_m) of the normalized invariant form."""
    num = (qs_monomial(1, 0) - qs_monomial(-1, 0)) ** m
    den = qfact(m) * _torus_factor(0, m, 0)
    return RationalFn2(num, den)


def hermitian_form(ell: int):
    """The pairing matrix on V_{4, ell} for the reversal-twisted form:
    <e_I, e_J> is nonzero only for J = reverse(I).  Returned as
    (composition list, {row: (col, value)})."""
    comps = compositions(4, ell)
    index = {c: k for k, c in enumerate(comps)}
    hv = {m: h_value(m) for m in range(ell + 1)}
    entries = {}
    for r, c in enumerate(comps):
        col = index[c[::-1]]
        val = RationalFn2.of(1)
        for m in c:
            val = val * hv[m]
        entries[r] = (col, val)
    return comps, entries


def starred_identities_check(ell: int) -> bool:
    """sigma_1^T H bar(sigma_3) = sigma_2^T H bar(sigma_2)
    = sigma_3^T H bar(sigma_1) = H on V_{4, ell}, exactly."""
    comps, H = hermitian_form(ell)
    D = len(comps)
    mats = {i: sigma_on_V(4, ell, i) for i in (1, 2, 3)}
    bars = {i: [[e.bar() for e in row] for row in mats[i]] for i in (1, 2, 3)}
    for i in (1, 2, 3):
        left, right = mats[i], bars[4 - i]
        for a in range(D):
            for b in range(D):
                acc = RationalFn2.of(0)
                for k in range(D):
                    if not left[k][a].terms:
                        continue
                    colk, hk = H[k]
                    if right[colk][b].terms:
                        acc = acc + hk * (left[k][a] * right[colk][b])
                want = H[a][1] if H[a][0] == b else RationalFn2.of(0)
                if not acc == want:
                    return False
    return True


def _d_t_matrices(ell: int):
    """D_4 (diagonal q^sum a_i(a_i+1)) and T_4 (reversal) on V_{4, ell}."""
    comps = compositions(4, ell)
    index = {c: k for k, c in enumerate(comps)}
    D = len(comps)
    Dm = [[ZERO] * D for _ in range(D)]
    Dm_inv = [[ZERO] * D for _ in range(D)]
    Tm = [[ZERO] * D for _ in range(D)]
    for k, c in enumerate(comps):
        e = sum(a * (a + 1) for a in c)
        Dm[k][k] = qs_monomial(e, 0)
        Dm_inv[k][k] = qs_monomial(-e, 0)
        Tm[index[c[::-1]]][k] = ONE
    return Dm, Dm_inv, Tm


def reversal_conjugation_check(ell: int) -> bool:
    """(D_4 T_4) sigma_i^-1 (D_4 T_4)^-1 = bar(sigma_(4-i)) on V_{4, ell}."""
    Dm, Dm_inv, Tm = _d_t_matrices(ell)
    L = ScaledMatrix.of_ring(mat_mul(Dm, Tm))
    Linv = ScaledMatrix.of_ring(mat_mul(Tm, Dm_inv))
    for i in (1, 2, 3):
        inv = sigma_inv_on_V(4, ell, i)
        lhs = (L @ inv) @ Linv
        rhs = ScaledMatrix.of_ring([[e.bar() for e in row]
                                    for row in sigma_on_V(4, ell, 4 - i)])
        if not lhs == rhs:
            return False
    return True


def intertwiner_construction_check(ell: int) -> bool:
    """The constructive transpose-intertwiner on V_{4, ell}: with H the
    twisted form and L = D_4 T_4, J_V = H (L^-1)^T satisfies
    J_V sigma_i^T = sigma_i J_V for every generator."""
    comps, H = hermitian_form(ell)
    D = len(comps)
    Dm, Dm_inv, Tm = _d_t_matrices(ell)
    LinvT = mat_transpose(mat_mul(Tm, Dm_inv))
    # J_V[i][j] = sum_k H[i][k] LinvT[k][j]; H has one entry per row
    JV = [[RationalFn2.of(0)] * D for _ in range(D)]
    for i in range(D):
        colk, hk = H[i]
        for j in range(D):
            if LinvT[colk][j].terms:
                JV[i][j] = hk * LinvT[colk][j]
    for i in (1, 2, 3):
        S = sigma_on_V(4, ell, i)
        ST = mat_transpose(S)
        for a in range(D):
            for b in range(D):
                lhs = RationalFn2.of(0)
                rhs = RationalFn2.of(0)
                for k in range(D):
                    if ST[k][b].terms and not JV[a][k].is_zero():
                        lhs = lhs + JV[a][k] * ST[k][b]
                    if S[a][k].terms and not JV[k][b].is_zero():
                        rhs = rhs + JV[k][b] * S[a][k]
                if not lhs == rhs:
                    return False
    return True


def intertwiner_J(mats: RepMatrices):
    """J with J sigma_i^T J^-1 = sigma_i on the W basis, from the
    nullspace of the commutation system; unique up to scalar by
    irreducibility (solution space of dimension != 1 is an error).

    Returns (J, info) with J over the ring, content-stripped.  The
    inverse-transpose automorphism A -> J (A^T)^-1 J^-1 then sends each
    sigma_i to sigma_i^-1 (same relation, inverted), and it squares to
    a scalar iff J is proportional to its own transpose, which is
    checked exactly.
    """
    d = mats.dim
    rows = []
    for i, S in mats.sigma.items():
        N = S.num
        for r in range(d):
            for c in range(d):
                row = [ZERO] * (d * d)
                for j in range(d):
                    row[r * d + j] = row[r * d + j] + N[c][j]   # J[r][j] N^T[j][c]
                for k in range(d):
                    row[k * d + c] = row[k * d + c] - N[r][k]   # N[r][k] J[k][c]
                rows.append(row)
    kern = nullspace(rows)
    if len(kern) != 1:
        raise ArithmeticError(
            f"intertwiner space has dimension {len(kern)}, not 1 "
            "(falsifies irreducibility)")
    vec = kern[0]
    J = [[vec[r * d + c] for c in range(d)] for r in range(d)]
    if rank(J) != d:
        raise ArithmeticError("intertwiner is singular")
    for i, S in mats.sigma.items():
        N = S.num
        if not mat_eq(mat_mul(J, mat_transpose(N)), mat_mul(N, J)):
            raise ArithmeticError("intertwiner verification failed")
    # phi^2 scalar <=> J proportional to J^T
    ab = next((r, c) for r in range(d) for c in range(d) if J[r][c].terms)
    sym = all(J[r][c] * J[ab[1]][ab[0]] == J[c][r] * J[ab[0]][ab[1]]
              for r in range(d) for c in range(d))
    return J, {"unique_up_to_scalar": True, "invertible": True,
               "conjugates_transpose": True, "phi_squared_scalar": sym}


# -- specialization -----------------------------------------------------------

def _mat_inv_mod(M, r):
    n = len(M)
    aug = [[M[i][j] % r for j in range(n)] + [1 if j == i else 0 for j in range(n)]
           for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] % r), None)
        if piv is None:
            raise ZeroDivisionError("matrix not invertible mod r")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], r - 2, r)
        aug[c] = [v * inv % r for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(vi - f * vc) % r for vi, vc in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def _is_scalar_mod(M, r):
    n = len(M)
    d = M[0][0] % r
    return all(M[i][j] % r == (d if i == j else 0) for i in range(n) for j in range(n))


def _proportional_mod(A, B, r):
    n = len(A)
    lam = None
    for i in range(n):
        for j in range(n):
            a, b = A[i][j] % r, B[i][j] % r
            if b:
                lam = a * pow(b, r - 2, r) % r
                break
        if lam is not None:
            break
    if lam is None:
        return _is_zero_mod(A, r)
    return all(A[i][j] % r == lam * B[i][j] % r for i in range(n) for j in range(n))


def _is_zero_mod(A, r):
    return all(v % r == 0 for row in A for v in row)


def specialize(mats: RepMatrices, r: int, q0: int, s0: int, J=None) -> dict:
    """Evaluate the representation at (q0, s0) over F_r.

    Re-verifies the braid relations over F_r, reports whether sigma_1
    and sigma_3 agree projectively (they must not) and whether
    x = sigma_1 sigma_3^-1 is scalar (it must not be).  Raises
    BadSpecializationError naming the offending matrix when a
    denominator vanishes.
    """
    if not is_prime(r):
        raise ValueError(f"modulus {r} is not prime")
    if q0 % r == 0 or s0 % r == 0:
        raise BadSpecializationError("q0, s0 must be invertible mod r")
    spec = {}
    for i, S in mats.sigma.items():
        try:
            spec[i] = S.eval_mod(q0, s0, r)
        except ZeroDivisionError:
            raise BadSpecializationError(
                f"denominator of sigma_{i} vanishes at (q0, s0) = ({q0}, {s0}) mod {r}",
                entry=f"sigma_{i}") from None

    def mult(A, B):
        n = len(A)
        return [[sum(A[i][k] * B[k][j] for k in range(n)) % r for j in range(n)]
                for i in range(n)]

    relations = True
    for i in range(1, mats.n - 1):
        ab = mult(spec[i], spec[i + 1])
        if mult(ab, spec[i]) != mult(spec[i + 1], ab):
            relations = False
    for i in range(1, mats.n):
        for j in range(i + 2, mats.n):
            if mult(spec[i], spec[j]) != mult(spec[j], spec[i]):
                relations = False

    out = {"r": r, "q0": q0 % r, "s0": s0 % r, "n": mats.n, "ell": mats.ell,
           "dim": mats.dim, "sigma": {i: spec[i] for i in spec},
           "relations_hold": relations}
    if mats.n >= 4:
        out["sigma1_eq_sigma3_projectively"] = _proportional_mod(spec[1], spec[3], r)
        x = mult(spec[1], _mat_inv_mod(spec[3], r))
        out["x_matrix"] = x
        out["x_nonscalar"] = not _is_scalar_mod(x, r)
    if J is not None:
        out["J"] = [[e.eval_mod(q0, s0, r) for e in row] for row in J]
    return out


# -- export -------------------------------------------------------------------

def poly_json(p: LaurentPoly2):
    return [[c, e, f] for (e, f), c in sorted(p.terms.items())]


def scaled_json(S: ScaledMatrix):
    return {"num": [[poly_json(e) for e in row] for row in S.num],
            "den": poly_json(S.den)}


def export_rep(mats: RepMatrices) -> dict:
    return {
        "n": mats.n, "ell": mats.ell, "dim": mats.dim,
        "basis": [[poly_json(e) for e in vec] for vec in mats.basis],
        "sigma": {str(i): scaled_json(S) for i, S in mats.sigma.items()},
    }


# -- single-module operator identities ---------------------------------------

def _vec_apply_K(vec, invert=False):
    sgn = -1 if invert else 1
    return {j: c * qs_monomial(-2 * j * sgn, sgn) for j, c in vec.items()}


def _vec_apply_E(vec):
    out = {}
    for j, c in vec.items():
        if j >= 1:
            out[j - 1] = out.get(j - 1, ZERO) + c
    return {j: c for j, c in out.items() if c.terms}


def _vec_apply_F(nn, vec):
    out = {}
    for j, c in vec.items():
        coeff = qbinom(nn + j, j) * _torus_factor(0, nn, j)
        out[j + nn] = out.get(j + nn, ZERO) + c * coeff
    return {j: c for j, c in out.items() if c.terms}


def _vec_eq(a, b):
    keys = set(a) | set(b)
    return all(a.get(k, ZERO) == b.get(k, ZERO) for k in keys)


def operator_relations_check(jmax: int = 6, nmax: int = 3) -> bool:
    """Defining relations as operator identities on v_0..v_jmax:
    K E K^-1 = q^2 E, K F^(n) K^-1 = q^(-2n) F^(n),
    F^(n) F^(m) = [n+m choose n]_q F^(n+m),
    [E, F^(n+1)] = F^(n) (q^-n K - q^n K^-1)."""
    for j in range(jmax + 1):
        v = {j: ONE}
        if not _vec_eq(_vec_apply_K(_vec_apply_E(v)),
                       {k: c * qs_monomial(2, 0)
                        for k, c in _vec_apply_E(_vec_apply_K(v)).items()}):
            return False
        for nn in range(1, nmax + 1):
            lhs = _vec_apply_K(_vec_apply_F(nn, v))
            rhs = {k: c * qs_monomial(-2 * nn, 0)
                   for k, c in _vec_apply_F(nn, _vec_apply_K(v)).items()}
            if not _vec_eq(lhs, rhs):
                return False
        for nn in range(nmax + 1):
            for mm in range(nmax + 1):
                lhs = _vec_apply_F(nn, _vec_apply_F(mm, v))
                rhs = {k: c * qbinom(nn + mm, nn)
                       for k, c in _vec_apply_F(nn + mm, v).items()}
                if not _vec_eq(lhs, rhs):
                    return False
        for nn in range(nmax + 1):
            lhs1 = _vec_apply_E(_vec_apply_F(nn + 1, v))
            lhs2 = _vec_apply_F(nn + 1, _vec_apply_E(v))
            lhs = {k: lhs1.get(k, ZERO) - lhs2.get(k, ZERO)
                   for k in set(lhs1) | set(lhs2)}
            mid1 = {k: c * qs_monomial(-nn, 0)
                    for k, c in _vec_apply_K(v).items()}
            mid2 = {k: c * qs_monomial(nn, 0)
                    for k, c in _vec_apply_K(v, invert=True).items()}
            mid = {k: mid1.get(k, ZERO) - mid2.get(k, ZERO)
                   for k in set(mid1) | set(mid2)}
            rhs = _vec_apply_F(nn, mid)
            lhs = {k: c for k, c in lhs.items() if c.terms}
            if not _vec_eq(lhs, rhs):
                return False
    return True
