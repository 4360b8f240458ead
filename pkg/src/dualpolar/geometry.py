"""Finite fields, formed spaces, and dual polar graphs.

Vertices are maximal isotropic subspaces, stored as reduced-row-echelon
basis matrices over F_q; the canonical vertex order is lexicographic on the
flattened rref entries (field elements as their integer encodings), so
enumeration is deterministic across runs.

Subspace intersections use packed characteristic bitmasks over the ambient
vector indices, so the pairwise distance data D - dim(x & y) is computed by
integer popcounts; graph distances come from an independent BFS.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .scalars import FamilyParams, family_params, prime_power_decomposition

__all__ = [
    "Fq",
    "FormedSpace",
    "IsoSubspace",
    "DPGraph",
    "build_space",
    "enumerate_maximal_isotropics",
    "dual_polar_graph",
    "max_isotropic_count",
    "export_edge_list",
    "InstanceTooLarge",
]


class InstanceTooLarge(RuntimeError):
    pass


# fixed defining polynomials (ascending coefficients, monic) per (p, k);
# anything else falls back to the lexicographically first monic irreducible
_DEFINING_POLYS = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 0, 1),
    (7, 2): (1, 0, 1),
}


class Fq:
    """Finite field with q0 = p**k elements; elements are ints 0..q0-1.

    The integer n encodes the polynomial sum_i digit_i t**i with digits
    base p, reduced by the fixed defining polynomial.
    """

    _cache = {}

    def __new__(cls, q0):
        if q0 in cls._cache:
            return cls._cache[q0]
        pk = prime_power_decomposition(q0)
        if pk is None:
            raise ValueError(f"{q0} is not a prime power")
        self = super().__new__(cls)
        self.q = q0
        self.p, self.k = pk
        self.poly = self._defining_poly()
        self._build_tables()
        cls._cache[q0] = self
        return self

    def _defining_poly(self):
        p, k = self.p, self.k
        if k == 1:
            return (0, 1)
        fixed = _DEFINING_POLYS.get((p, k))
        if fixed is not None:
            return fixed
        for tail in itertools.product(range(p), repeat=k):
            cand = tuple(tail) + (1,)
            if cand[0] != 0 and self._is_irreducible(cand):
                return cand
        raise RuntimeError("no irreducible polynomial found")

    def _is_irreducible(self, poly):
        # no roots + no factor of degree <= k//2 via trial division
        p, k = self.p, len(poly) - 1

        def pdiv(a, b):
            a = list(a)
            while len(a) >= len(b) and any(a):
                if a[-1] == 0:
                    a.pop()
                    continue
                f = a[-1] * pow(b[-1], p - 2, p) % p
                off = len(a) - len(b)
                for i, c in enumerate(b):
                    a[off + i] = (a[off + i] - f * c) % p
                a.pop()
            while a and a[-1] == 0:
                a.pop()
            return a

        for d in range(1, k // 2 + 1):
            for tail in itertools.product(range(p), repeat=d):
                b = tuple(tail) + (1,)
                if not pdiv(poly, b):
                    return False
        return True

    def _int_to_digits(self, n):
        out = []
        for _ in range(self.k):
            out.append(n % self.p)
            n //= self.p
        return out

    def _digits_to_int(self, d):
        out = 0
        for c in reversed(d[: self.k]):
            out = out * self.p + (c % self.p)
        return out

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            da = self._int_to_digits(a)
            for b in range(q):
                db = self._int_to_digits(b)
                add[a][b] = self._digits_to_int(
                    [(x + y) % p for x, y in zip(da, db)]
                )
                prod = [0] * (2 * k - 1)
                for i, x in enumerate(da):
                    if x:
                        for j, y in enumerate(db):
                            prod[i + j] = (prod[i + j] + x * y) % p
                # reduce by the defining polynomial
                for deg in range(2 * k - 2, k - 1, -1):
                    c = prod[deg]
                    if c:
                        prod[deg] = 0
                        for j in range(k):
                            prod[deg - k + j] = (prod[deg - k + j] - c * self.poly[j]) % p
                mul[a][b] = self._digits_to_int(prod)
        self._add = add
        self._mul = mul
        self._neg = [add[a].index(0) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            inv[a] = mul[a].index(1)
        self._inv = inv
        # Frobenius x -> x^p and, for even k, the involution x -> x^(p^(k/2))
        self.frob = [self.pow(a, p) for a in range(q)]
        if k % 2 == 0:
            r = p ** (k // 2)
            self.conj_table = [self.pow(a, r) for a in range(q)]
        else:
            self.conj_table = None

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Fq")
        return self._inv[a]

    def pow(self, a, n):
        out = 1
        base = a
        while n:
            if n & 1:
                out = self._mul[out][base]
            base = self._mul[base][base]
            n >>= 1
        return out

    def conj(self, a):
        if self.conj_table is None:
            raise ValueError("conjugation needs a square field order")
        return self.conj_table[a]

    def __repr__(self):
        return f"Fq({self.q})"


# ---------------------------------------------------------------------------
# vector helpers over Fq (vectors are int tuples)
# ---------------------------------------------------------------------------


def _vec_add(F, u, v):
    add = F._add
    return tuple(add[a][b] for a, b in zip(u, v))


def _vec_scale(F, c, u):
    mul = F._mul
    return tuple(mul[c][a] for a in u)


def _vec_addmul(F, u, c, v):
    """u + c*v."""
    add, mul = F._add, F._mul
    return tuple(add[a][mul[c][b]] for a, b in zip(u, v))


def fq_rref(F, rows):
    """rref over Fq; returns (rows tuple, pivot columns tuple)."""
    rows = [list(r) for r in rows if any(r)]
    m = len(rows)
    n = len(rows[0]) if m else 0
    piv = []
    r = 0
    for c in range(n):
        k = next((i for i in range(r, m) if rows[i][c]), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = F._inv[rows[r][c]]
        rows[r] = [F._mul[inv][x] for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = F._neg[rows[i][c]]
                rows[i] = list(_vec_addmul(F, tuple(rows[i]), f, tuple(rows[r])))
        piv.append(c)
        r += 1
        if r == m:
            break
    return tuple(tuple(map(int, row)) for row in rows[:r]), tuple(piv)


def fq_nullspace(F, rows, n):
    """Basis of {w : rows . w = 0} over Fq, vectors of length n."""
    red, piv = fq_rref(F, rows) if rows else ((), ())
    free = [c for c in range(n) if c not in piv]
    basis = []
    for fcol in free:
        w = [0] * n
        w[fcol] = 1
        for r, pcol in enumerate(piv):
            w[pcol] = F._neg[red[r][fcol]]
        basis.append(tuple(w))
    return basis


# ---------------------------------------------------------------------------
# formed spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IsoSubspace:
    """Totally isotropic subspace as an rref basis matrix (rows)."""

    rows: tuple

    @property
    def dim(self):
        return len(self.rows)

    def sort_key(self):
        return self.rows

    def __str__(self):
        return "[" + "; ".join(" ".join(map(str, r)) for r in self.rows) + "]"


class FormedSpace:
    """One of the six non-degenerate formed spaces over F_q."""

    def __init__(self, params: FamilyParams, q0: int):
        pk = prime_power_decomposition(q0)
        if pk is None:
            raise ValueError(f"{q0} is not a prime power")
        if params.hermitian:
            p, k = pk
            if k % 2 != 0:
                raise ValueError("Hermitian family requires square q")
        self.params = params
        self.q0 = q0
        self.F = Fq(q0)
        self.n = params.ambient_dim
        self.D = params.D
        kind = params.form_kind
        self.kind = kind
        D, n, F = self.D, self.n, self.F
        if kind == "alternating":
            bil = [[0] * n for _ in range(n)]
            for i in range(D):
                bil[i][D + i] = 1
                bil[D + i][i] = F._neg[1]
            self.bilinear_matrix = bil
            self.quad_coeffs = None
        elif kind == "quadratic":
            quad = {}
            for i in range(D):
                quad[(i, D + i)] = 1
            if params.tag == "B":
                quad[(n - 1, n - 1)] = 1
            elif params.tag == "2D":
                a = self._anisotropic_coeff()
                quad[(n - 2, n - 2)] = 1
                quad[(n - 2, n - 1)] = 1
                quad[(n - 1, n - 1)] = a
            self.quad_coeffs = quad
            bil = [[0] * n for _ in range(n)]
            for (i, j), c in quad.items():
                if i == j:
                    # B(x,y) = Q(x+y)-Q(x)-Q(y): the square term contributes 2c
                    two_c = F._add[c][c]
                    bil[i][i] = F._add[bil[i][i]][two_c]
                else:
                    bil[i][j] = F._add[bil[i][j]][c]
                    bil[j][i] = F._add[bil[j][i]][c]
            self.bilinear_matrix = bil
        elif kind == "hermitian":
            herm = [[0] * n for _ in range(n)]
            for i in range(D):
                herm[i][D + i] = 1
                herm[D + i][i] = 1
            if params.tag == "2A-even":
                herm[n - 1][n - 1] = 1
            self.bilinear_matrix = herm
            self.quad_coeffs = None
        else:
            raise ValueError(f"unsupported form kind {kind!r}")
        self._check_nondegenerate()

    def _anisotropic_coeff(self):
        """First a with t**2 + t + a irreducible over F_q."""
        F = self.F
        values = {F._add[F._mul[c][c]][c] for c in range(F.q)}  # c^2 + c
        for a in range(1, F.q):
            if F._neg[a] not in values:
                return a
        raise RuntimeError("no anisotropic binary form found")

    # -- form evaluations ----------------------------------------------------

    def bilinear(self, u, v):
        """Polar/alternating bilinear form, or the Hermitian form H(u, v)."""
        F = self.F
        total = 0
        if self.kind == "hermitian":
            v = tuple(F.conj_table[x] for x in v)
        M = self.bilinear_matrix
        for i, ui in enumerate(u):
            if ui:
                row = M[i]
                for j, vj in enumerate(v):
                    if vj and row[j]:
                        total = F._add[total][F._mul[ui][F._mul[row[j]][vj]]]
        return total

    def quad_value(self, u):
        F = self.F
        total = 0
        for (i, j), c in self.quad_coeffs.items():
            if u[i] and u[j]:
                total = F._add[total][F._mul[c][F._mul[u[i]][u[j]]]]
        return total

    def vector_isotropic(self, u):
        if self.kind == "quadratic":
            return self.quad_value(u) == 0
        return self.bilinear(u, u) == 0

    def subspace_isotropic(self, rows):
        """The form vanishes on the full row space."""
        for a in range(len(rows)):
            if not self.vector_isotropic(rows[a]):
                return False
            for b in range(a, len(rows)):
                if self.bilinear(rows[a], rows[b]) != 0:
                    return False
                if self.kind == "hermitian" and self.bilinear(rows[b], rows[a]) != 0:
                    return False
        return True

    def perp_constraints(self, rows):
        """Linear conditions on w equivalent to w being orthogonal to rows."""
        F = self.F
        out = []
        M = self.bilinear_matrix
        n = self.n
        for r in rows:
            if self.kind == "hermitian":
                rc = tuple(F.conj_table[x] for x in r)
                # H(w, r) = sum_i w_i * (M rc)_i
                out.append(
                    tuple(
                        _dotrow(F, M[i], rc) for i in range(n)
                    )
                )
            else:
                out.append(tuple(_dotrow(F, M[i], r) for i in range(n)))
        return out

    def _check_nondegenerate(self):
        F, n = self.F, self.n
        rad = fq_nullspace(F, [tuple(row) for row in self.bilinear_matrix], n)
        if self.kind == "quadratic" and self.F.p == 2 and self.params.tag == "B":
            # char-2 odd-dimensional quadric: one-dimensional polar radical
            # (the nucleus) is allowed when Q does not vanish on it
            if len(rad) != 1 or self.quad_value(rad[0]) == 0:
                raise ValueError("degenerate quadratic form")
        elif rad:
            raise ValueError("degenerate form")

    def __repr__(self):
        return f"FormedSpace({self.params.tag}, q0={self.q0}, D={self.D})"


def _dotrow(F, row, v):
    t = 0
    for c, x in zip(row, v):
        if c and x:
            t = F._add[t][F._mul[c][x]]
    return t


def build_space(tag, q0, D):
    return FormedSpace(family_params(tag, D), q0)


def integral_q_power(q0, exp):
    """q0**exp as an exact integer; exp may be a half-integer when q0 is a square."""
    p, k = prime_power_decomposition(q0)
    e4 = int(4 * exp)
    if (k * e4) % 4 != 0:
        raise ValueError(f"q^{exp} is not an integer for q={q0}")
    return p ** (k * e4 // 4)


def max_isotropic_count(params, q0):
    """Independent product-formula oracle: prod_{i=1..D} (q^(e+i-1) + 1)."""
    total = 1
    for i in range(1, params.D + 1):
        total *= integral_q_power(q0, params.e + i - 1) + 1
    return total


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def _extend_rref(F, rows, piv, w):
    """rref of rows + [w]; None if w lies in the row space."""
    for r, pc in enumerate(piv):
        if w[pc]:
            w = _vec_addmul(F, w, F._neg[w[pc]], rows[r])
    lead = next((c for c in range(len(w)) if w[c]), None)
    if lead is None:
        return None
    w = _vec_scale(F, F._inv[w[lead]], w)
    new_rows = []
    new_piv = []
    placed = False
    for r, pc in enumerate(piv):
        if not placed and lead < pc:
            new_rows.append(w)
            new_piv.append(lead)
            placed = True
        row = rows[r]
        if row[lead]:
            row = _vec_addmul(F, row, F._neg[row[lead]], w)
        new_rows.append(row)
        new_piv.append(pc)
    if not placed:
        new_rows.append(w)
        new_piv.append(lead)
    return tuple(new_rows), tuple(new_piv)


def _isotropic_candidates(space, rows):
    """Vectors w (canonical up to scalars) with rows + w still isotropic."""
    F, n = space.F, space.n
    null_basis = fq_nullspace(F, space.perp_constraints(rows), n)
    m = len(null_basis)
    for coeffs in itertools.product(range(F.q), repeat=m):
        # canonical: first nonzero coefficient is 1 (kills scalar multiples)
        lead = next((i for i, c in enumerate(coeffs) if c), None)
        if lead is None or coeffs[lead] != 1:
            continue
        w = (0,) * n
        for c, b in zip(coeffs, null_basis):
            if c:
                w = _vec_addmul(F, w, c, b)
        if space.kind == "quadratic" and space.quad_value(w) != 0:
            continue
        if space.kind == "hermitian" and space.bilinear(w, w) != 0:
            continue
        yield w


def enumerate_maximal_isotropics(space, max_vertices=10000, check_maximality=True):
    """All maximal isotropic subspaces in canonical (lexicographic) order.

    Level-by-level: extend isotropic k-spaces by isotropic vectors in their
    polar perp, canonicalize via rref, dedup.  Verifies the Witt index:
    dimension-D subspaces exist and none extends to D+1.
    """
    F, n, D = space.F, space.n, space.D
    level = {}
    for w in _isotropic_candidates(space, []):
        red, piv = fq_rref(F, [w])
        level[red] = piv
    for k in range(2, D + 1):
        nxt = {}
        for rows, piv in level.items():
            for w in _isotropic_candidates(space, rows):
                ext = _extend_rref(F, rows, piv, w)
                if ext is not None:
                    nxt[ext[0]] = ext[1]
            if len(nxt) > max_vertices * 8:
                raise InstanceTooLarge("instance too large")
        level = nxt
    if len(level) > max_vertices:
        raise InstanceTooLarge("instance too large")
    if check_maximality:
        for rows, piv in level.items():
            for w in _isotropic_candidates(space, rows):
                if _extend_rref(F, rows, piv, w) is not None:
                    raise ValueError("Witt index exceeds D: found a larger isotropic subspace")
    return [IsoSubspace(rows) for rows in sorted(level)]


# ---------------------------------------------------------------------------
# the graph
# ---------------------------------------------------------------------------


@dataclass
class DPGraph:
    params: FamilyParams
    q0: int
    vertices: list
    adjacency: np.ndarray          # bool, n x n
    subspace_distance: np.ndarray  # int8: D - dim(x & y)
    space: FormedSpace = field(default=None, repr=False)
    masks: list = field(default=None, repr=False)
    distance: np.ndarray = field(default=None)  # BFS path distance

    @property
    def size(self):
        return len(self.vertices)

    def neighbors(self, v):
        return np.nonzero(self.adjacency[v])[0]


def _vertex_mask(space, rows):
    """Characteristic bitmask of the subspace's vector set, packed base q."""
    F, n = space.F, space.n
    vecs = {(0,) * n}
    for r in rows:
        new = set()
        for v in vecs:
            for c in range(1, F.q):
                new.add(_vec_addmul(F, v, c, r))
        vecs |= new
    mask = 0
    q = F.q
    for v in vecs:
        idx = 0
        for x in reversed(v):
            idx = idx * q + x
        mask |= 1 << idx
    return mask, len(vecs)


def dual_polar_graph(space, max_vertices=10000):
    verts = enumerate_maximal_isotropics(space, max_vertices=max_vertices)
    n = len(verts)
    D, q = space.D, space.F.q
    masks = []
    for v in verts:
        mask, count = _vertex_mask(space, v.rows)
        assert count == q**D
        masks.append(mask)
    size_to_dim = {q**k: k for k in range(D + 1)}
    adj = np.zeros((n, n), dtype=bool)
    sd = np.zeros((n, n), dtype=np.int8)
    for i in range(n):
        mi = masks[i]
        for j in range(i + 1, n):
            inter = size_to_dim[(mi & masks[j]).bit_count()]
            d = D - inter
            sd[i, j] = sd[j, i] = d
            if d == 1:
                adj[i, j] = adj[j, i] = True
    g = DPGraph(space.params, space.q0, verts, adj, sd, space=space, masks=masks)
    g.distance = bfs_distances(adj)
    if np.any(g.distance < 0):
        raise ValueError("graph is not connected")
    return g


def bfs_distances(adj):
    """All-pairs path distances by layered BFS (exact integers)."""
    n = adj.shape[0]
    dist = np.full((n, n), -1, dtype=np.int16)
    for s in range(n):
        row = dist[s]
        row[s] = 0
        frontier = np.zeros(n, dtype=bool)
        frontier[s] = True
        visited = frontier.copy()
        r = 0
        while frontier.any():
            r += 1
            nxt = adj[frontier].any(axis=0) & ~visited
            row[nxt] = r
            visited |= nxt
            frontier = nxt
    return dist


def export_edge_list(graph):
    """Plain-text edge list: header '# family q D |X|', then 'u v' lines."""
    lines = [f"# {graph.params.tag} {graph.q0} {graph.params.D} {graph.size}"]
    n = graph.size
    for u in range(n):
        row = graph.adjacency[u]
        for v in range(u + 1, n):
            if row[v]:
                lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"
