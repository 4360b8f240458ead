"""Dense exact linear algebra over any exact field (Scalar, AlgNum, Fraction).

Matrices are numpy object arrays of field elements; ints mix in freely and
coerce through the element arithmetic.  Everything follows the column
convention: the matrix M of an operator L in an ordered basis (c_j)
satisfies L.c_j = sum_i M[i, j] c_i.

For graph-sized integer spectral projectors there is a separate int64 fast
path with a priori overflow bounds (falls back to big-int object arrays),
so all results stay exact.
"""

from __future__ import annotations

import numpy as np

from .scalars import conj

__all__ = [
    "ExactMatrix",
    "ExactVector",
    "rref",
    "primitive_idempotents",
    "gram_project",
    "restrict_operator",
    "cyclic_closure_dim",
    "safe_int_matmul",
    "int_idempotent_numerators",
]


def _is_zero(c):
    if isinstance(c, (int, np.integer)):
        return c == 0
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


def _norm(x):
    """Canonical (gcd-reduced) form of an entry, when the type supports it."""
    return x.reduced() if hasattr(x, "reduced") else x


def _div(a, b):
    """Exact division: int/int stays rational, never float."""
    from fractions import Fraction

    if isinstance(a, (int, np.integer)) and isinstance(b, (int, np.integer)):
        return Fraction(int(a), int(b))
    return a / b


class ExactMatrix:
    __slots__ = ("data",)

    def __init__(self, rows):
        if isinstance(rows, np.ndarray) and rows.dtype == object:
            self.data = rows
        else:
            arr = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
            for i, row in enumerate(rows):
                for j, x in enumerate(row):
                    arr[i, j] = x
            self.data = arr

    @staticmethod
    def identity(n):
        arr = np.empty((n, n), dtype=object)
        arr[:] = 0
        for k in range(n):
            arr[k, k] = 1
        return ExactMatrix(arr)

    @staticmethod
    def zeros(m, n):
        arr = np.empty((m, n), dtype=object)
        arr[:] = 0
        return ExactMatrix(arr)

    @staticmethod
    def diagonal(entries):
        n = len(entries)
        out = ExactMatrix.zeros(n, n)
        for k, x in enumerate(entries):
            out.data[k, k] = x
        return ExactMatrix(out.data)

    @staticmethod
    def from_columns(cols):
        m = len(cols[0])
        arr = np.empty((m, len(cols)), dtype=object)
        for j, col in enumerate(cols):
            vec = col.data if isinstance(col, ExactVector) else col
            for i in range(m):
                arr[i, j] = vec[i]
        return ExactMatrix(arr)

    @property
    def shape(self):
        return self.data.shape

    def __getitem__(self, ij):
        return self.data[ij]

    def row(self, i):
        return list(self.data[i, :])

    def column(self, j):
        return ExactVector(list(self.data[:, j]))

    def __add__(self, other):
        return ExactMatrix(self.data + other.data)

    def __sub__(self, other):
        return ExactMatrix(self.data - other.data)

    def __neg__(self):
        return ExactMatrix(-self.data)

    def __matmul__(self, other):
        if isinstance(other, ExactVector):
            return ExactVector(list(np.dot(self.data, other.data)))
        return ExactMatrix(np.dot(self.data, other.data))

    def scale(self, c):
        return ExactMatrix(self.data * c)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        arr = np.empty(self.data.shape, dtype=object)
        for i in range(self.data.shape[0]):
            for j in range(self.data.shape[1]):
                arr[i, j] = _div(self.data[i, j], c)
        return ExactMatrix(arr)

    def transpose(self):
        return ExactMatrix(self.data.T.copy())

    def conj_transpose(self):
        arr = np.empty(self.data.T.shape, dtype=object)
        for i in range(arr.shape[0]):
            for j in range(arr.shape[1]):
                arr[i, j] = conj(self.data[j, i])
        return ExactMatrix(arr)

    def map(self, fn):
        arr = np.empty(self.data.shape, dtype=object)
        for i in range(self.data.shape[0]):
            for j in range(self.data.shape[1]):
                arr[i, j] = fn(self.data[i, j])
        return ExactMatrix(arr)

    def trace(self):
        t = self.data[0, 0]
        for k in range(1, min(self.shape)):
            t = t + self.data[k, k]
        return t

    def is_zero(self):
        return all(_is_zero(x) for x in self.data.flat)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return (self - other).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return NotImplemented if r is NotImplemented else not r

    def rank(self):
        return len(rref(self)[1])

    def inverse(self):
        n = self.shape[0]
        if self.shape[1] != n:
            raise ValueError("inverse of a non-square matrix")
        aug = np.concatenate([self.data, ExactMatrix.identity(n).data], axis=1)
        red, pivots = rref(ExactMatrix(aug))
        if list(pivots) != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return ExactMatrix(red.data[:, n:].copy())

    def power(self, k):
        n = self.shape[0]
        if k < 0:
            return self.inverse().power(-k)
        out = ExactMatrix.identity(n)
        for _ in range(k):
            out = out @ self
        return out

    def tolist(self):
        return [list(r) for r in self.data]

    def __repr__(self):
        return f"ExactMatrix({self.shape[0]}x{self.shape[1]})"


class ExactVector:
    __slots__ = ("data",)

    def __init__(self, entries):
        if isinstance(entries, np.ndarray) and entries.dtype == object:
            self.data = entries
        else:
            arr = np.empty(len(entries), dtype=object)
            for k, x in enumerate(entries):
                arr[k] = x
            self.data = arr

    @staticmethod
    def unit(n, k):
        v = ExactVector([0] * n)
        v.data[k] = 1
        return v

    def __len__(self):
        return len(self.data)

    def __getitem__(self, k):
        return self.data[k]

    def __add__(self, other):
        return ExactVector(self.data + other.data)

    def __sub__(self, other):
        return ExactVector(self.data - other.data)

    def __neg__(self):
        return ExactVector(-self.data)

    def __mul__(self, c):
        return ExactVector(self.data * c)

    __rmul__ = __mul__

    def is_zero(self):
        return all(_is_zero(x) for x in self.data)

    def __eq__(self, other):
        if not isinstance(other, ExactVector):
            return NotImplemented
        return len(self) == len(other) and (self - other).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return NotImplemented if r is NotImplemented else not r

    def gram_inner(self, other, gram_diag):
        """<self, other> = sum_k self_k * conj(other_k) * g_k."""
        total = 0
        for a, b, g in zip(self.data, other.data, gram_diag):
            if _is_zero(a) or _is_zero(b):
                continue
            total = total + a * conj(b) * g
        return total

    def tolist(self):
        return list(self.data)

    def __repr__(self):
        return f"ExactVector({self.tolist()})"


def rref(M):
    """Reduced row echelon form with exact first-nonzero pivoting.

    Returns (R, pivot_columns).  Idempotent; preserves the row space.
    """
    rows = [list(r) for r in M.data]
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for k in range(r, m):
            if not _is_zero(rows[k][c]):
                piv = k
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        rows[r] = [_norm(_div(x, inv)) for x in rows[r]]
        for k in range(m):
            if k != r and not _is_zero(rows[k][c]):
                f = rows[k][c]
                rows[k] = [_norm(a - f * b) for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return ExactMatrix(rows) if m else M, tuple(pivots)


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not _is_zero(x):
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return out


def _poly_mod(a, m):
    a = list(a)
    dm = len(m) - 1
    while len(a) > dm:
        c = a[-1]
        if not _is_zero(c):
            for j in range(dm + 1):
                a[len(a) - 1 - dm + j] = a[len(a) - 1 - dm + j] - c * m[j]
        a.pop()
    return a


def primitive_idempotents(A, eigenvalues, check=True):
    """Spectral projectors of A for a known multiplicity-free spectrum.

    E_i = prod_{j != i} (A - theta_j) / (theta_i - theta_j), computed with
    shared prefix/suffix products.  Verifies that the eigenvalues are
    pairwise distinct and that prod_j (A - theta_j) = 0; together with the
    (also checked) Lagrange congruences mod the minimal polynomial these
    imply E_i E_j = delta_ij E_i, sum E_i = I and A = sum theta_i E_i.
    """
    thetas = list(eigenvalues)
    n = A.shape[0]
    k = len(thetas)
    for i in range(k):
        for j in range(i + 1, k):
            if _is_zero(thetas[i] - thetas[j]):
                raise ValueError("eigenvalues not distinct")
    ident = ExactMatrix.identity(n)
    factors = [A - ident.scale(t) for t in thetas]
    prefix = [ident]
    for f in factors:
        prefix.append(prefix[-1] @ f)
    if check and not prefix[-1].is_zero():
        raise ValueError("not multiplicity-free on this space")
    suffix = [ident]
    for f in reversed(factors):
        suffix.append(f @ suffix[-1])
    suffix.reverse()
    out = []
    for i in range(k):
        d = None
        for j in range(k):
            if j != i:
                t = thetas[i] - thetas[j]
                d = t if d is None else d * t
        Ei = (prefix[i] @ suffix[i + 1]) / (d if d is not None else 1)
        out.append(Ei)
    if check:
        _check_lagrange_congruences(thetas)
    return out


def _check_lagrange_congruences(thetas):
    """Univariate certification of the idempotent identities."""
    k = len(thetas)
    m = [1]
    for t in thetas:
        m = _poly_mul(m, [0 - t, 1])
    polys = []
    for i in range(k):
        p = [1]
        d = 1
        for j in range(k):
            if j != i:
                p = _poly_mul(p, [0 - thetas[j], 1])
                d = d * (thetas[i] - thetas[j])
        polys.append([_div(c, d) for c in p])
    tot = [0] * k
    lin = [0] * k
    for i, p in enumerate(polys):
        for j, c in enumerate(p):
            tot[j] = tot[j] + c
            lin[j] = lin[j] + c * thetas[i]
    ok = _is_zero(tot[0] - 1) and all(_is_zero(c) for c in tot[1:])
    ok = ok and _is_zero(lin[1] - 1) and _is_zero(lin[0]) and all(
        _is_zero(c) for c in lin[2:]
    )
    for i, p in enumerate(polys):
        sq = _poly_mod(_poly_mul(p, p), m)
        sq = sq + [0] * (k - len(sq))
        ok = ok and all(_is_zero(sq[j] - (p[j] if j < len(p) else 0)) for j in range(k))
    if not ok:
        raise AssertionError("Lagrange congruence check failed")


def gram_project(basis, gram_diag, check=True):
    """Orthogonal projection onto span(basis) for a diagonal Hermitian form.

    basis: list of ExactVector; gram_diag: the diagonal weights.  Returns the
    projector matrix P with P @ b = b on the span, P annihilating the
    orthogonal complement, and gram * P = conj-transpose(P) * gram.
    """
    B = ExactMatrix.from_columns(basis)
    G = ExactMatrix.diagonal(list(gram_diag))
    Bh = B.conj_transpose()
    M = Bh @ (G @ B)
    kdim = len(basis)
    red, piv = rref(M)
    if len(piv) != kdim:
        raise ValueError("dependent basis")
    P = (B @ M.inverse()) @ (Bh @ G)
    if check:
        if not (P @ P == P):
            raise AssertionError("projection is not idempotent")
        if not (P @ B == B):
            raise AssertionError("projection does not fix the span")
        if not (G @ P == P.conj_transpose() @ G):
            raise AssertionError("projection is not self-adjoint for the form")
    return P


def restrict_operator(op, basis):
    """Matrix of op on span(basis), in the given basis (column convention).

    Raises if the span is not op-invariant or the basis is dependent.
    """
    B = ExactMatrix.from_columns(basis)
    img = op @ B
    n, k = B.shape
    aug = np.concatenate([B.data, img.data], axis=1)
    red, piv = rref(ExactMatrix(aug))
    piv_in_B = [c for c in piv if c < k]
    if len(piv_in_B) != k:
        raise ValueError("dependent basis")
    if any(c >= k for c in piv):
        raise ValueError("subspace is not invariant under the operator")
    out = ExactMatrix.zeros(k, k)
    for r in range(k):
        for j in range(k):
            out.data[r, j] = red.data[r, k + j]
    return out


def cyclic_closure_dim(seeds, operators, max_dim=None):
    """Dimension of the smallest subspace containing seeds and closed under
    the operators (all over the same exact field)."""
    n = len(seeds[0])
    if max_dim is None:
        max_dim = n
    pivots = {}  # pivot column -> row, rows kept mutually reduced

    def reduce_add(vec):
        v = list(vec.data)
        for c, row in pivots.items():
            if not _is_zero(v[c]):
                f = v[c]
                v = [_norm(a - f * b) for a, b in zip(v, row)]
        lead = next((c for c in range(n) if not _is_zero(v[c])), None)
        if lead is None:
            return False
        inv = v[lead]
        v = [_norm(_div(x, inv)) for x in v]
        for c, row in pivots.items():
            if not _is_zero(row[lead]):
                f = row[lead]
                pivots[c] = [_norm(a - f * b) for a, b in zip(row, v)]
        pivots[lead] = v
        return True

    frontier = []
    for s in seeds:
        if reduce_add(s):
            frontier.append(s)
    while frontier and len(pivots) < max_dim:
        nxt = []
        for vec in frontier:
            for op in operators:
                w = op @ vec
                if reduce_add(w):
                    nxt.append(w)
        frontier = nxt
    return len(pivots)


# ---------------------------------------------------------------------------
# integer fast path for graph-sized spectral work
# ---------------------------------------------------------------------------

_INT64_LIMIT = 1 << 62


def safe_int_matmul(a, b):
    """Exact product of integer matrices; int64 when provably safe."""
    ma = int(np.max(np.abs(a))) if a.size else 0
    mb = int(np.max(np.abs(b))) if b.size else 0
    bound = a.shape[1] * ma * mb
    if bound < _INT64_LIMIT and a.dtype != object and b.dtype != object:
        return np.matmul(a.astype(np.int64), b.astype(np.int64))
    return np.dot(a.astype(object), b.astype(object))


def int_idempotent_numerators(A, eigenvalues):
    """Integer numerators N_i and denominators d_i with E_i = N_i / d_i.

    A: square integer numpy array; eigenvalues: distinct integers with
    prod_j (A - theta_j) = 0 (checked).  Uses prefix/suffix products so the
    whole family costs 3k matrix products.
    """
    thetas = [int(t) for t in eigenvalues]
    if len(set(thetas)) != len(thetas):
        raise ValueError("eigenvalues not distinct")
    n = A.shape[0]
    eye = np.eye(n, dtype=np.int64)
    factors = [A.astype(np.int64) - t * eye for t in thetas]
    prefix = [eye]
    for f in factors:
        prefix.append(safe_int_matmul(prefix[-1], f))
    if np.any(prefix[-1] != 0):
        raise ValueError("not multiplicity-free on this space")
    suffix = [eye]
    for f in reversed(factors):
        suffix.append(safe_int_matmul(f, suffix[-1]))
    suffix.reverse()
    nums, dens = [], []
    for i in range(len(thetas)):
        d = 1
        for j in range(len(thetas)):
            if j != i:
                d *= thetas[i] - thetas[j]
        nums.append(safe_int_matmul(prefix[i], suffix[i + 1]))
        dens.append(d)
    return nums, dens
