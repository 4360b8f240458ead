"""Distance-regular analytics and the 2D-dimensional module over a base
vertex x and a maximal clique C through it.

Two backends build the same structure:

* concrete -- exact rational matrices measured on an enumerated dual polar
  graph, with every coefficient cross-checked against the closed forms;
* formal -- Scalar (rational functions of q = v**4) matrices built from the
  closed forms, with every structural identity verified symbolically.

The ordered basis is (C_0^-, C_0^+, ..., C_{D-1}^-, C_{D-1}^+), where
C_i^- and C_i^+ split the distance-i neighborhood of the clique by the
distance to the base vertex; index (i, -) -> 2i, (i, +) -> 2i+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import integral_q_power
from .linalg import (
    ExactMatrix,
    ExactVector,
    cyclic_closure_dim,
    gram_project,
    int_idempotent_numerators,
    primitive_idempotents,
    rref,
)
from .scalars import Scalar, q_pochhammer, q_power

__all__ = [
    "DRGProfile",
    "CliquePartition",
    "WModule",
    "CheckFailure",
    "profile_formal",
    "profile_from_graph",
    "clique_partition",
    "default_base_pair",
    "random_base_pair",
    "build_w_module_formal",
    "build_w_module_concrete",
    "w_module_checks",
]


class CheckFailure(AssertionError):
    """A named structural identity failed; carries the check id."""

    def __init__(self, name, detail=""):
        super().__init__(f"{name}: {detail}" if detail else name)
        self.check = name
        self.detail = detail


def q_frac(q0, exp):
    """q0**exp as an exact Fraction; exp a (half-)integer, any sign."""
    exp = Fraction(exp)
    if exp >= 0:
        return Fraction(integral_q_power(q0, exp))
    return Fraction(1, integral_q_power(q0, -exp))


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------


@dataclass
class DRGProfile:
    """Intersection numbers, spectrum and dual spectrum of the graph and of
    its clique-distance partition."""

    D: int
    a: list
    b: list
    c: list
    theta: list
    theta_star: list
    clique_a: list
    clique_b: list
    clique_c: list
    clique_theta_star: list

    def validate(self):
        D = self.D
        th0 = self.theta[0]
        for i in range(D + 1):
            if self.a[i] + self.b[i] + self.c[i] != th0:
                raise CheckFailure("profile.row-sum", f"i={i}")
            if self.a[i] != self.c[i] * self.a[1]:
                raise CheckFailure("profile.near-polygon-a", f"i={i}")
        if self.b[D] != 0 or self.c[0] != 0:
            raise CheckFailure("profile.boundary")
        for i in range(D):
            if self.clique_c[i] != self.c[i]:
                raise CheckFailure("profile.clique-c", f"i={i}")
            if i <= D - 2 and self.clique_b[i] != self.b[i + 1]:
                raise CheckFailure("profile.clique-b", f"i={i}")
        for i in range(D):
            if len({_key(t) for t in self.theta}) != D + 1:
                raise CheckFailure("profile.spectrum-distinct")

    def to_json_dict(self):
        return {
            "D": self.D,
            "a": [str(x) for x in self.a],
            "b": [str(x) for x in self.b],
            "c": [str(x) for x in self.c],
            "theta": [str(x) for x in self.theta],
            "theta_star": [str(x) for x in self.theta_star],
            "clique_a": [str(x) for x in self.clique_a],
            "clique_b": [str(x) for x in self.clique_b],
            "clique_c": [str(x) for x in self.clique_c],
            "clique_theta_star": [str(x) for x in self.clique_theta_star],
        }


def _key(x):
    return str(x) if isinstance(x, Scalar) else x


def profile_formal(e, D):
    """All profile sequences as exact rational functions of formal q."""
    e = Fraction(e)
    q = q_power(1)
    qe = q_power(e)

    def gint(n):
        return (q**n - 1) / (q - 1)

    a = [(qe - 1) * gint(i) for i in range(D + 1)]
    b = [q_power(e + i) * gint(D - i) for i in range(D + 1)]
    c = [gint(i) for i in range(D + 1)]
    theta = [qe * gint(D - i) - gint(i) for i in range(D + 1)]
    lead = q * (1 + q_power(e + D - 2)) / (1 - q)
    slope = (
        q
        * (1 + q_power(e + D - 2))
        * (1 + q_power(e + D - 1))
        / ((q - 1) * (1 + q_power(e - 1)))
    )
    theta_star = [lead + slope * q_power(-i) for i in range(D + 1)]
    ca = [qe * gint(i + 1) - gint(i) for i in range(D)]
    cb = [q_power(e + i + 1) * gint(D - i - 1) for i in range(D)]
    cc = [gint(i) for i in range(D)]
    slope_cl = slope * (1 + q_power(e - 1)) / (1 + qe)
    c_theta_star = [lead + slope_cl * q_power(-i) for i in range(D)]
    prof = DRGProfile(D, a, b, c, theta, theta_star, ca, cb, cc, c_theta_star)
    prof.validate()
    for i in range(D):
        alt = (theta_star[i] + qe * theta_star[i + 1]) / (1 + qe)
        if alt != c_theta_star[i]:
            raise CheckFailure("profile.clique-dual-eigenvalue-average", f"i={i}")
    return prof


def _expected_profile_concrete(e, D, q0):
    """The formal closed forms evaluated at q = q0, as Fractions."""
    qe = q_frac(q0, e)

    def gint(n):
        return Fraction(q0**n - 1, q0 - 1)

    a = [(qe - 1) * gint(i) for i in range(D + 1)]
    b = [q_frac(q0, e + i) * gint(D - i) for i in range(D + 1)]
    c = [gint(i) for i in range(D + 1)]
    theta = [qe * gint(D - i) - gint(i) for i in range(D + 1)]
    lead = q0 * (1 + q_frac(q0, e + D - 2)) / Fraction(1 - q0)
    slope = (
        q0
        * (1 + q_frac(q0, e + D - 2))
        * (1 + q_frac(q0, e + D - 1))
        / ((q0 - 1) * (1 + q_frac(q0, e - 1)))
    )
    theta_star = [lead + slope * q_frac(q0, -i) for i in range(D + 1)]
    ca = [qe * gint(i + 1) - gint(i) for i in range(D)]
    cb = [q_frac(q0, e + i + 1) * gint(D - i - 1) for i in range(D)]
    cc = [gint(i) for i in range(D)]
    slope_cl = slope * (1 + q_frac(q0, e - 1)) / (1 + qe)
    c_theta_star = [lead + slope_cl * q_frac(q0, -i) for i in range(D)]
    return DRGProfile(D, a, b, c, theta, theta_star, ca, cb, cc, c_theta_star)


def profile_from_graph(G):
    """Measure the profile on an enumerated graph and verify it against the
    closed forms; the dual eigenvalues are read off the exact rational
    spectral projector for the second-largest eigenvalue."""
    n = G.size
    A = G.adjacency.astype(np.int64)
    dist = G.distance
    D = int(dist.max())
    if D != G.params.D:
        raise CheckFailure("profile.diameter", f"got {D}, family says {G.params.D}")
    expected = _expected_profile_concrete(G.params.e, D, G.q0)

    P = [(dist == i).astype(np.int64) for i in range(D + 1)]
    a = [None] * (D + 1)
    b = [None] * (D + 1)
    c = [None] * (D + 1)
    for i in range(D + 1):
        M = A @ P[i]
        for j in range(D + 1):
            vals = np.unique(M[dist == j])
            if len(vals) != 1:
                raise CheckFailure(
                    "profile.intersection-number-constancy",
                    f"distance {i}: values {vals.tolist()} on class {j}",
                )
            v = int(vals[0])
            if j == i:
                a[i] = v
            elif j == i + 1:
                c[i + 1] = v
            elif j == i - 1:
                b[i - 1] = v
            elif v != 0:
                raise CheckFailure(
                    "profile.intersection-number-support", f"({i},{j}) -> {v}"
                )
    b[D] = 0
    c[0] = 0
    b0 = int(A[0].sum())
    if b[0] != b0:
        raise CheckFailure("profile.valency")

    if [Fraction(x) for x in a] != expected.a or [Fraction(x) for x in b] != expected.b or [
        Fraction(x) for x in c
    ] != expected.c:
        raise CheckFailure("profile.intersection-numbers-closed-form")

    theta = [x for x in expected.theta]
    if any(t.denominator != 1 for t in theta):
        raise CheckFailure("profile.spectrum-integrality")
    theta_int = [int(t) for t in theta]
    # verifies prod_j (A - theta_j I) = 0 along the way
    try:
        nums, dens = int_idempotent_numerators(A, theta_int)
    except ValueError as exc:
        raise CheckFailure("profile.spectrum-closed-form", str(exc))

    n1, d1 = nums[1], dens[1]
    theta_star = []
    for i in range(D + 1):
        vals = np.unique(n1[dist == i])
        if len(vals) != 1:
            raise CheckFailure("profile.dual-eigenvalue-constancy", f"class {i}")
        theta_star.append(Fraction(n * int(vals[0]), d1))
    if theta_star != expected.theta_star:
        raise CheckFailure("profile.dual-eigenvalues-closed-form")
    if Fraction(int(np.trace(n1)), d1) != theta_star[0]:
        raise CheckFailure("profile.dual-eigenvalue-trace", "trace(E1) != theta*_0")

    prof = DRGProfile(
        D,
        [Fraction(x) for x in a],
        [Fraction(x) for x in b],
        [Fraction(x) for x in c],
        expected.theta,
        theta_star,
        expected.clique_a,
        expected.clique_b,
        expected.clique_c,
        expected.clique_theta_star,
    )
    prof.validate()
    return prof


# ---------------------------------------------------------------------------
# the clique partition
# ---------------------------------------------------------------------------




@dataclass
class CliquePartition:
    graph: object
    x: int
    clique: tuple
    cell_of: np.ndarray       # vertex -> cell index, (i,-) -> 2i, (i,+) -> 2i+1
    counts: list              # |cell| for each of the 2D cells
    table: np.ndarray         # table[k][j]: neighbors in cell j of any member of cell k
    profile: DRGProfile

    @property
    def D(self):
        return self.profile.D

    def members(self, k):
        return np.nonzero(self.cell_of == k)[0]

    def to_json_dict(self):
        return {
            "family": self.graph.params.tag,
            "q": self.graph.q0,
            "D": self.D,
            "base_vertex": int(self.x),
            "clique": [int(v) for v in self.clique],
            "cell_sizes": [int(c) for c in self.counts],
        }


def default_base_pair(G):
    """Deterministic base pair: x = the standard maximal isotropic spanned by
    the first D hyperbolic basis vectors, C = the vertices containing its
    first D-1 rows."""
    D, n = G.params.D, G.space.n
    std_rows = tuple(
        tuple(1 if j == i else 0 for j in range(n)) for i in range(D)
    )
    index = {v.rows: k for k, v in enumerate(G.vertices)}
    x = index[std_rows]
    from .geometry import _vertex_mask

    hmask, _ = _vertex_mask(G.space, std_rows[: D - 1])
    clique = tuple(
        k for k, m in enumerate(G.masks) if m & hmask == hmask
    )
    return x, clique


def random_base_pair(G, seed):
    """Seeded random base pair (x, C) for the choice-independence checks."""
    import random as _random

    rng = _random.Random(seed)
    x = rng.randrange(G.size)
    nbrs = list(G.neighbors(x))
    y = rng.choice(nbrs)
    hmask = G.masks[x] & G.masks[y]
    clique = tuple(k for k, m in enumerate(G.masks) if m & hmask == hmask)
    return x, clique


def clique_partition(G, x=None, clique=None):
    """Split the vertex set by (distance to C, distance to x) and verify that
    the refined partition is equitable with the expected coefficient tables."""
    if x is None or clique is None:
        x, clique = default_base_pair(G)
    clique = tuple(sorted(clique))
    adj = G.adjacency
    n = G.size
    prof = profile_from_graph(G)
    D = prof.D
    e = G.params.e
    q0 = G.q0

    if x not in clique:
        raise CheckFailure("partition.base-vertex-in-clique")
    for u in clique:
        for v in clique:
            if u != v and not adj[u, v]:
                raise CheckFailure("partition.clique-is-clique")
    all_adj = np.all(adj[:, clique], axis=1)
    if np.any(all_adj):
        raise CheckFailure("partition.clique-maximality")
    if len(clique) != 1 + integral_q_power(q0, e):
        raise CheckFailure(
            "partition.clique-size", f"{len(clique)} != 1 + q^e"
        )

    dist_x = G.distance[x].astype(np.int64)
    dist_c = G.distance[:, clique].min(axis=1).astype(np.int64)
    cell_of = np.full(n, -1, dtype=np.int64)
    for z in range(n):
        i = int(dist_c[z])
        dx = int(dist_x[z])
        if dx == i:
            cell_of[z] = 2 * i
        elif dx == i + 1:
            cell_of[z] = 2 * i + 1
        else:
            raise CheckFailure(
                "partition.cell-membership", f"vertex {z}: d(x)={dx}, d(C)={i}"
            )
    if int(dist_c.max()) != D - 1:
        raise CheckFailure("partition.clique-covering-radius")

    counts = [int(np.sum(cell_of == k)) for k in range(2 * D)]
    exp_counts = _expected_cell_counts(e, D, q0)
    if [Fraction(c) for c in counts] != exp_counts:
        raise CheckFailure("partition.cell-counts", f"{counts}")

    onehot = np.zeros((n, 2 * D), dtype=np.int64)
    onehot[np.arange(n), cell_of] = 1
    nbr_counts = adj.astype(np.int64) @ onehot
    table = np.zeros((2 * D, 2 * D), dtype=np.int64)
    for k in range(2 * D):
        rows = nbr_counts[cell_of == k]
        if len(np.unique(rows, axis=0)) != 1:
            raise CheckFailure("partition.equitable", f"cell {k}")
        table[k] = rows[0]

    a, b, c = prof.a, prof.b, prof.c
    for i in range(D):
        exp_minus = {(2 * (i - 1)): c[i], 2 * i: a[i],
                     2 * i + 1: b[i] - b[i + 1], 2 * (i + 1): b[i + 1]}
        exp_plus = {(2 * (i - 1) + 1): c[i], 2 * i: c[i + 1] - c[i],
                    2 * i + 1: a[i + 1], 2 * (i + 1) + 1: b[i + 1]}
        for j in range(2 * D):
            want = exp_minus.get(j, Fraction(0))
            if Fraction(int(table[2 * i][j])) != want:
                raise CheckFailure(
                    "partition.coefficient-table-minus", f"cell ({i},-), column {j}"
                )
            want = exp_plus.get(j, Fraction(0))
            if Fraction(int(table[2 * i + 1][j])) != want:
                raise CheckFailure(
                    "partition.coefficient-table-plus", f"cell ({i},+), column {j}"
                )

    if list(np.nonzero(cell_of == 0)[0]) != [x]:
        raise CheckFailure("partition.base-cell", "C_0^- != {x}")

    return CliquePartition(G, x, clique, cell_of, counts, table, prof)


def _expected_cell_counts(e, D, q0):
    """|C_i^-| = q^(ie) prod_{m=1..i} (q^D - q^m)/(q^m - 1); |C_i^+| = q^e |C_i^-|."""
    out = []
    for i in range(D):
        base = q_frac(q0, Fraction(i) * e)
        for m in range(1, i + 1):
            base *= Fraction(q0**D - q0**m, q0**m - 1)
        out.append(base)
        out.append(base * q_frac(q0, e))
    return out


def _formal_cell_counts(e, D):
    q = q_power(1)
    qe = q_power(e)
    out = []
    for i in range(D):
        base = q_power(Fraction(i) * Fraction(e))
        for m in range(1, i + 1):
            base = base * (q**D - q**m) / (q**m - 1)
        out.append(base)
        out.append(base * qe)
    return out


# ---------------------------------------------------------------------------
# the module W
# ---------------------------------------------------------------------------


@dataclass
class WModule:
    """The 2D-dimensional module spanned by the cell characteristic vectors,
    with its three generating operators, three idempotent families, the two
    orthogonal projections, and the distinguished vectors."""

    e: Fraction
    D: int
    backend: str                # "formal" or "concrete"
    q0: object                  # None in the formal backend
    profile: DRGProfile
    gram: list                  # diagonal of the Hermitian form, length 2D
    total: object               # |X|
    A: ExactMatrix
    Astar: ExactMatrix
    Astar_cl: ExactMatrix
    E: list                     # D+1 spectral idempotents of A on W
    Estar: list                 # D+1 diagonal idempotents (distance to x)
    Estar_cl: list              # D diagonal idempotents (distance to C)
    proj_x: ExactMatrix         # orthogonal projection onto span{A_i x}
    proj_cl: ExactMatrix        # orthogonal projection onto span{C_i}
    x_hat: ExactVector
    c_hat: ExactVector
    w: ExactVector
    w_cl: ExactVector
    u_perp: list                # D-1 vectors, distance side
    u_perp_cl: list             # D vectors, clique side
    cnorm: object
    cnorm_cl: object
    partition: object = None    # concrete backend only

    # -- index helpers -------------------------------------------------------

    @staticmethod
    def idx(i, sign):
        return 2 * i + (0 if sign == "-" else 1)

    def dist_vector(self, i):
        """A_i x as a coordinate vector: C_{i-1}^+ + C_i^-."""
        v = ExactVector([0] * (2 * self.D))
        if i == 0:
            v.data[0] = 1
        elif i == self.D:
            v.data[2 * self.D - 1] = 1
        else:
            v.data[2 * i - 1] = 1
            v.data[2 * i] = 1
        return v

    def clique_vector(self, i):
        v = ExactVector([0] * (2 * self.D))
        v.data[2 * i] = 1
        v.data[2 * i + 1] = 1
        return v

    def gram_inner(self, u, v):
        return u.gram_inner(v, self.gram)

    def map(self, fn):
        """Entrywise image of the whole module under a ring map."""
        import copy

        lifted = WModule(
            e=self.e,
            D=self.D,
            backend=self.backend,
            q0=self.q0,
            profile=self.profile,
            gram=[fn(x) for x in self.gram],
            total=fn(self.total),
            A=self.A.map(fn),
            Astar=self.Astar.map(fn),
            Astar_cl=self.Astar_cl.map(fn),
            E=[m.map(fn) for m in self.E],
            Estar=[m.map(fn) for m in self.Estar],
            Estar_cl=[m.map(fn) for m in self.Estar_cl],
            proj_x=self.proj_x.map(fn),
            proj_cl=self.proj_cl.map(fn),
            x_hat=ExactVector([fn(x) for x in self.x_hat.data]),
            c_hat=ExactVector([fn(x) for x in self.c_hat.data]),
            w=ExactVector([fn(x) for x in self.w.data]),
            w_cl=ExactVector([fn(x) for x in self.w_cl.data]),
            u_perp=[ExactVector([fn(x) for x in v.data]) for v in self.u_perp],
            u_perp_cl=[ExactVector([fn(x) for x in v.data]) for v in self.u_perp_cl],
            cnorm=fn(self.cnorm),
            cnorm_cl=fn(self.cnorm_cl),
            partition=self.partition,
        )
        return lifted

    def structure_fingerprint(self):
        """All structure constants as canonical strings (order-stable)."""
        parts = []
        for name, M in (
            ("A", self.A),
            ("Astar", self.Astar),
            ("Astar_cl", self.Astar_cl),
            ("proj_x", self.proj_x),
            ("proj_cl", self.proj_cl),
        ):
            parts.append(name + ":" + ";".join(str(x) for x in M.data.flat))
        for k, M in enumerate(self.E):
            parts.append(f"E{k}:" + ";".join(str(x) for x in M.data.flat))
        parts.append("gram:" + ";".join(str(x) for x in self.gram))
        return "|".join(parts)


def _w_matrices(e, D, prof, qp):
    """Shared construction of A, Astar, Astar_cl, projections and vectors
    from a profile; qp(r) is q**r in the backend field."""
    n2 = 2 * D
    a, b, c = prof.a, prof.b, prof.c
    A = ExactMatrix.zeros(n2, n2)
    for i in range(D):
        col = 2 * i
        if i >= 1:
            A.data[2 * (i - 1), col] = b[i]
        A.data[2 * i, col] = a[i]
        A.data[2 * i + 1, col] = c[i + 1] - c[i]
        if i + 1 <= D - 1:
            A.data[2 * (i + 1), col] = c[i + 1]
        col = 2 * i + 1
        if i >= 1:
            A.data[2 * (i - 1) + 1, col] = b[i]
        A.data[2 * i, col] = b[i] - b[i + 1]
        A.data[2 * i + 1, col] = a[i + 1]
        if i + 1 <= D - 1:
            A.data[2 * (i + 1) + 1, col] = c[i + 1]
    Astar = ExactMatrix.diagonal(
        [prof.theta_star[i // 2 + i % 2] for i in range(n2)]
    )
    Astar_cl = ExactMatrix.diagonal(
        [prof.clique_theta_star[i // 2] for i in range(n2)]
    )

    Estar = []
    for i in range(D + 1):
        diag = [0] * n2
        if i >= 1:
            diag[2 * (i - 1) + 1] = 1
        if i <= D - 1:
            diag[2 * i] = 1
        Estar.append(ExactMatrix.diagonal(diag))
    Estar_cl = []
    for i in range(D):
        diag = [0] * n2
        diag[2 * i] = 1
        diag[2 * i + 1] = 1
        Estar_cl.append(ExactMatrix.diagonal(diag))

    qD = qp(D)
    proj_x = ExactMatrix.zeros(n2, n2)
    proj_x.data[0, 0] = 1
    proj_x.data[n2 - 1, n2 - 1] = 1
    for i in range(1, D):
        lo = (qp(i) - 1) / (qD - 1)
        hi = (qD - qp(i)) / (qD - 1)
        for r in (2 * i - 1, 2 * i):
            proj_x.data[r, 2 * i - 1] = lo
            proj_x.data[r, 2 * i] = hi
    qe = qp(e)
    proj_cl = ExactMatrix.zeros(n2, n2)
    for i in range(D):
        lo = 1 / (1 + qe)
        hi = qe / (1 + qe)
        for r in (2 * i, 2 * i + 1):
            proj_cl.data[r, 2 * i] = lo
            proj_cl.data[r, 2 * i + 1] = hi

    x_hat = ExactVector.unit(n2, 0)
    c_hat = ExactVector([0] * n2)
    c_hat.data[0] = 1
    c_hat.data[1] = 1
    w = ExactVector([0] * n2)
    w_cl = ExactVector([0] * n2)
    for i in range(D):
        w.data[2 * i] = qp(-i) - 1
        w.data[2 * i + 1] = qp(D - i - 1) - 1
        w_cl.data[2 * i] = -qp(Fraction(e) - i)
        w_cl.data[2 * i + 1] = qp(-i)
    u_perp = []
    for i in range(D - 1):
        v = ExactVector([0] * n2)
        v.data[2 * i + 1] = qp(D - i - 1) - 1
        v.data[2 * (i + 1)] = qp(-i - 1) - 1
        u_perp.append(v)
    u_perp_cl = []
    for i in range(D):
        v = ExactVector([0] * n2)
        v.data[2 * i] = -qp(Fraction(e) - i)
        v.data[2 * i + 1] = qp(-i)
        u_perp_cl.append(v)

    alpha_star = qp(1) * (1 + qp(Fraction(e) + D - 2)) / (1 - qp(1))
    beta_star = (
        qp(1)
        * (1 + qp(Fraction(e) + D - 2))
        * (1 + qp(Fraction(e) + D - 1))
        / ((qp(1) - 1) * (1 + qp(Fraction(e) - 1)))
    )
    return (
        A,
        Astar,
        Astar_cl,
        Estar,
        Estar_cl,
        proj_x,
        proj_cl,
        x_hat,
        c_hat,
        w,
        w_cl,
        u_perp,
        u_perp_cl,
        alpha_star,
        beta_star,
    )


def build_w_module_formal(e, D, check=True):
    e = Fraction(e)
    prof = profile_formal(e, D)

    def qp(r):
        return q_power(r)

    (
        A,
        Astar,
        Astar_cl,
        Estar,
        Estar_cl,
        proj_x,
        proj_cl,
        x_hat,
        c_hat,
        w,
        w_cl,
        u_perp,
        u_perp_cl,
        alpha_star,
        beta_star,
    ) = _w_matrices(e, D, prof, qp)
    E = primitive_idempotents(A, prof.theta)
    total = q_pochhammer(-1 * q_power(e), D)
    cnorm = (
        total
        * (alpha_star + beta_star)
        / (alpha_star * beta_star * q_power(Fraction(e) - 1) * (1 - q_power(1)))
    )
    cnorm_cl = (
        total * q_power(1) * (1 + q_power(e)) / (beta_star * (1 - q_power(1)))
    )
    gram = _formal_cell_counts(e, D)
    W = WModule(
        e=e,
        D=D,
        backend="formal",
        q0=None,
        profile=prof,
        gram=gram,
        total=total,
        A=A,
        Astar=Astar,
        Astar_cl=Astar_cl,
        E=E,
        Estar=Estar,
        Estar_cl=Estar_cl,
        proj_x=proj_x,
        proj_cl=proj_cl,
        x_hat=x_hat,
        c_hat=c_hat,
        w=w,
        w_cl=w_cl,
        u_perp=u_perp,
        u_perp_cl=u_perp_cl,
        cnorm=cnorm,
        cnorm_cl=cnorm_cl,
    )
    if check:
        run_w_module_checks(W)
    return W


def build_w_module_concrete(partition, check=True):
    """Build the module from an enumerated graph's clique partition and verify
    the measured action against the closed-form coefficient tables."""
    G = partition.graph
    prof = partition.profile
    e, D, q0 = G.params.e, prof.D, G.q0

    def qp(r):
        return q_frac(q0, r)

    (
        A,
        Astar,
        Astar_cl,
        Estar,
        Estar_cl,
        proj_x,
        proj_cl,
        x_hat,
        c_hat,
        w,
        w_cl,
        u_perp,
        u_perp_cl,
        alpha_star,
        beta_star,
    ) = _w_matrices(e, D, prof, qp)

    # measured adjacency action: the equitable table itself
    measured = ExactMatrix(
        [[Fraction(int(partition.table[i][j])) for j in range(2 * D)] for i in range(2 * D)]
    )
    if measured != A:
        raise CheckFailure("wmodule.adjacency-action-table")

    # dual adjacency via the exact spectral projector, summed over the clique
    A_int = G.adjacency.astype(np.int64)
    theta_int = [int(t) for t in prof.theta]
    nums, dens = int_idempotent_numerators(A_int, theta_int)
    n1, d1 = nums[1], dens[1]
    nvert = G.size
    for z in range(nvert):
        val = Fraction(nvert * int(n1[z, partition.x]), d1)
        cell = int(partition.cell_of[z])
        i, plus = divmod(cell, 2)
        want = prof.theta_star[i + 1] if plus else prof.theta_star[i]
        if val != want:
            raise CheckFailure("wmodule.dual-adjacency-from-projector", f"vertex {z}")
        val_cl = Fraction(
            nvert * int(sum(n1[z, y] for y in partition.clique)),
            d1 * len(partition.clique),
        )
        if val_cl != prof.clique_theta_star[i]:
            raise CheckFailure(
                "wmodule.clique-dual-adjacency-from-projector", f"vertex {z}"
            )

    E = primitive_idempotents(A, prof.theta)
    total = Fraction(nvert)
    cnorm = (
        total
        * (alpha_star + beta_star)
        / (alpha_star * beta_star * qp(Fraction(e) - 1) * (1 - Fraction(q0)))
    )
    cnorm_cl = total * q0 * (1 + qp(e)) / (beta_star * (1 - q0))
    gram = [Fraction(c) for c in partition.counts]
    W = WModule(
        e=Fraction(e),
        D=D,
        backend="concrete",
        q0=q0,
        profile=prof,
        gram=gram,
        total=total,
        A=A,
        Astar=Astar,
        Astar_cl=Astar_cl,
        E=E,
        Estar=Estar,
        Estar_cl=Estar_cl,
        proj_x=proj_x,
        proj_cl=proj_cl,
        x_hat=x_hat,
        c_hat=c_hat,
        w=w,
        w_cl=w_cl,
        u_perp=u_perp,
        u_perp_cl=u_perp_cl,
        cnorm=cnorm,
        cnorm_cl=cnorm_cl,
        partition=partition,
    )
    if check:
        run_w_module_checks(W)
    return W


# ---------------------------------------------------------------------------
# structural checks shared by both backends
# ---------------------------------------------------------------------------


def w_module_checks(W):
    """Named structural identities of the module; each entry is
    (check id, zero-argument callable raising CheckFailure)."""
    n2 = 2 * W.D
    ident = ExactMatrix.identity(n2)
    G = ExactMatrix.diagonal(W.gram)

    def chk_idempotent_family():
        tot = ExactMatrix.zeros(n2, n2)
        recon = ExactMatrix.zeros(n2, n2)
        for th, Ei in zip(W.profile.theta, W.E):
            if not (W.A @ Ei == Ei.scale(th)):
                raise CheckFailure("wmodule.spectral-idempotents", "A E_i != theta_i E_i")
            tot = tot + Ei
            recon = recon + Ei.scale(th)
        if tot != ident:
            raise CheckFailure("wmodule.spectral-idempotents", "sum E_i != I")
        if recon != W.A:
            raise CheckFailure("wmodule.spectral-idempotents", "sum theta_i E_i != A")

    def chk_idempotent_ranks():
        # certified idempotents: rank equals trace
        traces = [Ei.trace() for Ei in W.E]
        want = [1] + [2] * (W.D - 1) + [1]
        for t, r in zip(traces, want):
            if not (t == r):
                raise CheckFailure("wmodule.idempotent-ranks", f"trace {t} != {r}")

    def chk_dual_idempotents():
        tot = ExactMatrix.zeros(n2, n2)
        rec = ExactMatrix.zeros(n2, n2)
        for th, Ei in zip(W.profile.theta_star, W.Estar):
            tot = tot + Ei
            rec = rec + Ei.scale(th)
        if tot != ident or rec != W.Astar:
            raise CheckFailure("wmodule.dual-idempotents")
        tot = ExactMatrix.zeros(n2, n2)
        rec = ExactMatrix.zeros(n2, n2)
        for th, Ei in zip(W.profile.clique_theta_star, W.Estar_cl):
            tot = tot + Ei
            rec = rec + Ei.scale(th)
        if tot != ident or rec != W.Astar_cl:
            raise CheckFailure("wmodule.clique-dual-idempotents")

    def chk_projections():
        for P, basis, killed, name in (
            (
                W.proj_x,
                [W.dist_vector(i) for i in range(W.D + 1)],
                W.u_perp,
                "wmodule.projection-x",
            ),
            (
                W.proj_cl,
                [W.clique_vector(i) for i in range(W.D)],
                W.u_perp_cl,
                "wmodule.projection-clique",
            ),
        ):
            if not (P @ P == P):
                raise CheckFailure(name, "not idempotent")
            for v in basis:
                if not (P @ v == v):
                    raise CheckFailure(name, "does not fix the span")
            for v in killed:
                if not (P @ v).is_zero():
                    raise CheckFailure(name, "does not annihilate the complement")
            if not (G @ P == P.conj_transpose() @ G):
                raise CheckFailure(name, "not self-adjoint")
            Pg = gram_project(basis, W.gram)
            if not (Pg == P):
                raise CheckFailure(name, "disagrees with the Gram projection")

    def chk_complement_vectors():
        for i, v in enumerate(W.u_perp):
            if not (W.Estar[i + 1] @ W.w == v):
                raise CheckFailure("wmodule.u-perp", f"i={i}")
        if not (W.Estar[0] @ W.w).is_zero() or not (W.Estar[W.D] @ W.w).is_zero():
            raise CheckFailure("wmodule.u-perp", "w meets the end cells")
        for i, v in enumerate(W.u_perp_cl):
            if not (W.Estar_cl[i] @ W.w_cl == v):
                raise CheckFailure("wmodule.u-perp-clique", f"i={i}")

    def chk_generator_vectors():
        E1 = W.E[1]
        th0s, th1s = W.profile.theta_star[0], W.profile.theta_star[1]
        qe = _qe_of(W)
        rat = (th0s + qe * th1s) / th0s
        lhs = ExactVector(
            [
                W.cnorm * (a - rat * b)
                for a, b in zip((E1 @ W.c_hat).data, (E1 @ W.x_hat).data)
            ]
        )
        if not (lhs == W.w):
            raise CheckFailure("wmodule.w-from-projector")
        lhs = ExactVector(
            [
                W.cnorm_cl * (a - b / (1 + qe))
                for a, b in zip((E1 @ W.x_hat).data, (E1 @ W.c_hat).data)
            ]
        )
        if not (lhs == W.w_cl):
            raise CheckFailure("wmodule.w-clique-from-projector")

    def chk_first_idempotent_inner_products():
        E1 = W.E[1]
        e1x = E1 @ W.x_hat
        e1c = E1 @ W.c_hat
        th0s, th1s = W.profile.theta_star[0], W.profile.theta_star[1]
        qe = _qe_of(W)
        tot = W.total
        if not (W.gram_inner(e1x, e1x) == th0s / tot):
            raise CheckFailure("wmodule.norm-E1x")
        if not (W.gram_inner(e1x, e1c) == (th0s + qe * th1s) / tot):
            raise CheckFailure("wmodule.inner-E1x-E1C")
        if not (W.gram_inner(e1c, e1c) == (1 + qe) * (th0s + qe * th1s) / tot):
            raise CheckFailure("wmodule.norm-E1C")

    def chk_span_dimensions():
        M = ExactMatrix.from_columns([W.dist_vector(i) for i in range(W.D + 1)])
        if M.rank() != W.D + 1:
            raise CheckFailure("wmodule.span-x-dimension")
        M = ExactMatrix.from_columns([W.clique_vector(i) for i in range(W.D)])
        if M.rank() != W.D:
            raise CheckFailure("wmodule.span-clique-dimension")

    def chk_irreducible():
        dim = cyclic_closure_dim([W.x_hat], [W.A, W.Astar, W.Astar_cl])
        if dim != n2:
            raise CheckFailure("wmodule.irreducible", f"closure dim {dim}")

    return [
        ("wmodule.spectral-idempotents", chk_idempotent_family),
        ("wmodule.idempotent-ranks", chk_idempotent_ranks),
        ("wmodule.dual-idempotents", chk_dual_idempotents),
        ("wmodule.projections", chk_projections),
        ("wmodule.complement-vectors", chk_complement_vectors),
        ("wmodule.generator-vectors", chk_generator_vectors),
        ("wmodule.first-idempotent-inner-products", chk_first_idempotent_inner_products),
        ("wmodule.span-dimensions", chk_span_dimensions),
        ("wmodule.irreducible", chk_irreducible),
    ]


def _qe_of(W):
    if W.backend == "formal":
        return q_power(W.e)
    return q_frac(W.q0, W.e)


def run_w_module_checks(W):
    for _, fn in w_module_checks(W):
        fn()
