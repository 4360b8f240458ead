"""A rank-one nil-DAHA acting on the 2D-dimensional module.

The algebra has generators T, U, X (X invertible) with derived elements
T' = X T^-1 and U' = X^-1 (U + 1), subject to

    (T - kappa)(T + 1/kappa) = 0,   (T' - kappa')(T' + 1/kappa') = 0,
    U (U + 1) = 0,                  U'^2 = 0,

with kappa = q^(-e/2) and kappa' = sqrt(-1) q^(-D/2).  The 2D-dimensional
representation is assembled from 2x2 blocks aligned with the cell pairs of
the ordered basis; column convention throughout.  The bridge identities
express the module's three generating operators through X, T, U and
identify the two orthogonal projections with normalized Hecke generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .drg import CheckFailure, q_frac
from .leonard import clique_seq, vertex_seq
from .linalg import ExactMatrix, cyclic_closure_dim
from .scalars import AlgNumField, Scalar, imag_unit, q_power

__all__ = [
    "NilDahaRep",
    "build_rep_formal",
    "build_rep_concrete",
    "relation_checks",
    "x_action_checks",
    "bridge_checks",
    "run_checks",
]


@dataclass
class NilDahaRep:
    e: Fraction
    D: int
    qp: object
    imag: object
    kappa: object
    kappa_p: object
    t: ExactMatrix
    tp: ExactMatrix
    u: ExactMatrix
    up: ExactMatrix
    x: ExactMatrix
    x_inv: ExactMatrix
    a_op: ExactMatrix          # X + X^-1
    astar_op: ExactMatrix      # sqrt(-1) q^(-D/2) (T U' + U T')
    astar_cl_op: ExactMatrix   # sqrt(-1) q^(-D/2) (T U' + q U T')
    tau: object


def _place(M, r0, c0, block):
    for i, row in enumerate(block):
        for j, v in enumerate(row):
            M.data[r0 + i, c0 + j] = v


def build_rep(e, D, qp, imag):
    e = Fraction(e)
    n2 = 2 * D
    half_e = e / 2
    halfD = Fraction(D, 2)
    kappa = qp(-half_e)
    kappa_p = imag * qp(-halfD)

    t = ExactMatrix.zeros(n2, n2)
    t_block = [
        [qp(-half_e) - qp(half_e), qp(half_e)],
        [qp(-half_e), 0],
    ]
    for i in range(D):
        _place(t, 2 * i, 2 * i, t_block)

    tp = ExactMatrix.zeros(n2, n2)
    tp.data[0, 0] = imag * qp(-halfD)
    tp.data[n2 - 1, n2 - 1] = imag * qp(-halfD)
    for i in range(1, D):
        blk = [
            [
                imag * qp(-halfD) * (qp(D) - qp(i) + 1),
                imag * qp(halfD) * (qp(i - D) - 1),
            ],
            [imag * qp(-halfD) * (1 - qp(i)), imag * qp(i - halfD)],
        ]
        _place(tp, 2 * i - 1, 2 * i - 1, blk)

    u = ExactMatrix.zeros(n2, n2)
    u.data[n2 - 1, n2 - 1] = -1 + 0 * kappa
    for i in range(1, D):
        blk = [[-1 + 0 * kappa, 1 - qp(D - i)], [0, 0]]
        _place(u, 2 * i - 1, 2 * i - 1, blk)

    up = ExactMatrix.zeros(n2, n2)
    for i in range(D):
        val = -imag * qp((Fraction(D) - Fraction(e)) / 2 - i)
        blk = [[0, 0], [val, 0]]
        _place(up, 2 * i, 2 * i, blk)

    x = tp @ t
    x_inv = x.inverse()
    a_op = x + x_inv
    scale = imag * qp(-halfD)
    q1 = qp(1)
    astar_op = ((t @ up) + (u @ tp)).scale(scale)
    astar_cl_op = ((t @ up) + (u @ tp).scale(q1)).scale(scale)
    tau = vertex_seq(e, D, qp, imag).tau
    return NilDahaRep(
        e, D, qp, imag, kappa, kappa_p, t, tp, u, up, x, x_inv,
        a_op, astar_op, astar_cl_op, tau,
    )


def build_rep_formal(e, D):
    return build_rep(e, D, q_power, imag_unit())


def build_rep_concrete(e, D, q0):
    F = AlgNumField(q0)

    def qp(r):
        r4 = Fraction(r) * 4
        if r4.denominator != 1:
            raise ValueError("fractional power of v in concrete field")
        return F.s() ** int(r4)

    return build_rep(e, D, qp, F.i())


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def relation_checks(rep):
    n2 = 2 * rep.D
    ident = ExactMatrix.identity(n2)

    def quad(M, k):
        return (M - ident.scale(k)) @ (M + ident.scale(1 / k))

    def chk_t():
        if not quad(rep.t, rep.kappa).is_zero():
            raise CheckFailure("nildaha.quadratic-t")

    def chk_tp():
        if not quad(rep.tp, rep.kappa_p).is_zero():
            raise CheckFailure("nildaha.quadratic-t-prime")

    def chk_u():
        if not (rep.u @ (rep.u + ident)).is_zero():
            raise CheckFailure("nildaha.quadratic-u")

    def chk_up():
        if not (rep.up @ rep.up).is_zero():
            raise CheckFailure("nildaha.square-zero-u-prime")

    def chk_tp_from_x():
        if not (rep.tp @ rep.t == rep.x):
            raise CheckFailure("nildaha.t-prime-definition")
        if not (rep.x @ rep.x_inv == ident):
            raise CheckFailure("nildaha.x-invertible")

    def chk_xup():
        if not (rep.x @ rep.up == rep.u + ident):
            raise CheckFailure("nildaha.x-u-prime")

    def chk_up_qux():
        if not (rep.up == (rep.u @ rep.x).scale(rep.qp(1))):
            raise CheckFailure("nildaha.u-prime-q-u-x")

    return [
        ("nildaha.quadratic-t", chk_t),
        ("nildaha.quadratic-t-prime", chk_tp),
        ("nildaha.quadratic-u", chk_u),
        ("nildaha.square-zero-u-prime", chk_up),
        ("nildaha.t-prime-definition", chk_tp_from_x),
        ("nildaha.x-u-prime", chk_xup),
        ("nildaha.u-prime-q-u-x", chk_up_qux),
    ]


def _expected_x_tables(rep):
    """The four coefficient tables for X^{+-1} and the combined operator
    A = X + X^-1, as full matrices (column convention)."""
    D, qp, tau = rep.D, rep.qp, rep.tau
    n2 = 2 * D
    mix = tau * qp(D) + 1 / tau
    X = ExactMatrix.zeros(n2, n2)
    Xi = ExactMatrix.zeros(n2, n2)
    A = ExactMatrix.zeros(n2, n2)

    def put(M, i, sign, j, sign2, val):
        # coefficient of basis (j, sign2) in M . basis(i, sign)
        if 0 <= j <= D - 1:
            M.data[2 * j + (0 if sign2 == "-" else 1), 2 * i + (0 if sign == "-" else 1)] = val

    for i in range(D):
        put(X, i, "-", i - 1, "+", mix * (qp(i - D) - 1))
        put(X, i, "-", i, "-", mix * qp(i - D))
        put(X, i, "-", i, "+", tau * (qp(D) - qp(i + 1) + 1))
        put(X, i, "-", i + 1, "-", tau * (1 - qp(i + 1)))
        put(X, i, "+", i - 1, "+", (1 - qp(i - D)) / tau)
        put(X, i, "+", i, "-", -qp(i - D) / tau)

        put(Xi, i, "-", i - 1, "-", (1 - qp(i - D)) / tau)
        put(Xi, i, "-", i - 1, "+", mix * (1 - qp(i - D)))
        put(Xi, i, "-", i, "+", -tau * (qp(D) - qp(i) + 1))
        put(Xi, i, "+", i, "-", qp(i - D + 1) / tau)
        put(Xi, i, "+", i, "+", mix * qp(i - D + 1))
        put(Xi, i, "+", i + 1, "+", tau * (1 - qp(i + 1)))

        put(A, i, "-", i - 1, "-", (1 - qp(i - D)) / tau)
        put(A, i, "-", i, "-", mix * qp(i - D))
        put(A, i, "-", i, "+", tau * qp(i) * (1 - qp(1)))
        put(A, i, "-", i + 1, "-", tau * (1 - qp(i + 1)))
        put(A, i, "+", i - 1, "+", (1 - qp(i - D)) / tau)
        put(A, i, "+", i, "-", qp(i - D) * (qp(1) - 1) / tau)
        put(A, i, "+", i, "+", mix * qp(i - D + 1))
        put(A, i, "+", i + 1, "+", tau * (1 - qp(i + 1)))
    return X, Xi, A


def x_action_checks(rep):
    def chk_x_table():
        X, Xi, A = _expected_x_tables(rep)
        _match(rep.x, X, "nildaha.x-action-table")
        _match(rep.x_inv, Xi, "nildaha.x-inverse-action-table")
        _match(rep.a_op, A, "nildaha.x-plus-inverse-table")

    def chk_astar_diag():
        D, qp = rep.D, rep.qp
        for i in range(D):
            want_m = qp(-i)
            want_p = qp(-i - 1)
            if not (rep.astar_op[2 * i, 2 * i] == want_m):
                raise CheckFailure("nildaha.dual-diagonal", f"(-, {i})")
            if not (rep.astar_op[2 * i + 1, 2 * i + 1] == want_p):
                raise CheckFailure("nildaha.dual-diagonal", f"(+, {i})")
            for k in (2 * i, 2 * i + 1):
                if not (rep.astar_cl_op[k, k] == qp(-i)):
                    raise CheckFailure("nildaha.clique-dual-diagonal", f"{k}")
        _assert_diagonal(rep.astar_op, "nildaha.dual-diagonal")
        _assert_diagonal(rep.astar_cl_op, "nildaha.clique-dual-diagonal")

    def chk_x_inverse_on_base():
        # X^-1 . x = -tau q^D C_0^+
        col = [rep.x_inv[r, 0] for r in range(2 * rep.D)]
        want = -rep.tau * rep.qp(rep.D)
        if not (col[1] == want):
            raise CheckFailure("nildaha.x-inverse-on-base-vertex")
        for r, v in enumerate(col):
            if r != 1 and not _z(v):
                raise CheckFailure("nildaha.x-inverse-on-base-vertex", f"row {r}")

    return [
        ("nildaha.x-action-table", chk_x_table),
        ("nildaha.dual-diagonals", chk_astar_diag),
        ("nildaha.x-inverse-on-base-vertex", chk_x_inverse_on_base),
    ]


def _z(v):
    if isinstance(v, int):
        return v == 0
    if hasattr(v, "is_zero"):
        return v.is_zero()
    return v == 0


def _assert_diagonal(M, name):
    n = M.shape[0]
    for i in range(n):
        for j in range(n):
            if i != j and not _z(M[i, j]):
                raise CheckFailure(name, f"off-diagonal ({i},{j})")


def _match(M, expected, name):
    n = M.shape[0]
    for i in range(n):
        for j in range(n):
            a, b = M[i, j], expected[i, j]
            if not (_z(a - b) if not isinstance(a, int) or not isinstance(b, int) else a == b):
                raise CheckFailure(name, f"({i},{j}): expected {b}, got {a}")


def bridge_checks(rep, W):
    """The module's operators through the algebra's, and the projections as
    normalized Hecke generators.  W must be over the same field as rep
    (use W.map to lift a concrete module into the evaluation field)."""
    n2 = 2 * rep.D
    ident = ExactMatrix.identity(n2)
    qp, imag = rep.qp, rep.imag
    vs = vertex_seq(rep.e, rep.D, qp, imag)
    cs = clique_seq(rep.e, rep.D, qp, imag)

    def chk_a():
        want = ident.scale(vs.alpha) + rep.a_op.scale(vs.beta * vs.tau)
        if not (W.A == want):
            raise CheckFailure("bridge.adjacency")

    def chk_astar():
        want = ident.scale(vs.alpha_star) + rep.astar_op.scale(vs.beta_star)
        if not (W.Astar == want):
            raise CheckFailure("bridge.dual-adjacency")

    def chk_astar_cl():
        want = ident.scale(cs.alpha_star) + rep.astar_cl_op.scale(cs.beta_star)
        if not (W.Astar_cl == want):
            raise CheckFailure("bridge.clique-dual-adjacency")

    def chk_proj_x():
        den = rep.kappa_p + 1 / rep.kappa_p
        want = (rep.tp + ident.scale(1 / rep.kappa_p)) / den
        if not (W.proj_x == want):
            raise CheckFailure("bridge.projection-x")

    def chk_proj_cl():
        den = rep.kappa + 1 / rep.kappa
        want = (rep.t + ident.scale(1 / rep.kappa)) / den
        if not (W.proj_cl == want):
            raise CheckFailure("bridge.projection-clique")

    def chk_irreducible():
        dim = cyclic_closure_dim([W.x_hat], [rep.t, rep.u, rep.x])
        if dim != n2:
            raise CheckFailure("bridge.irreducible", f"closure dim {dim}")

    return [
        ("bridge.adjacency", chk_a),
        ("bridge.dual-adjacency", chk_astar),
        ("bridge.clique-dual-adjacency", chk_astar_cl),
        ("bridge.projection-x", chk_proj_x),
        ("bridge.projection-clique", chk_proj_cl),
        ("bridge.irreducible", chk_irreducible),
    ]


def run_checks(checks):
    for _, fn in checks:
        fn()
