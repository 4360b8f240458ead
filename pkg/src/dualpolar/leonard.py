"""Leonard systems of dual q-Krawtchouk type.

A parameter sequence (alpha, alpha*, beta, beta*, gamma; q, d) determines
eigenvalue sequences theta_i = alpha + beta q^-i + gamma q^i and
theta*_i = alpha* + beta* q^-i, split sequences phi_i, phi2_i, closed-form
intersection numbers b_i = beta(1 - q^(i-d)), c_i = gamma(1 - q^i), the
normalized eigenvector polynomials f_i (terminating 3-term basic
hypergeometric sums), their monic symmetric Laurent form h_i, and the
weights m_i = trace(E_i E*_0).

The module W carries four such systems: on the span of the distance
vectors A_i x, on its orthogonal complement, on the span of the clique
distance vectors C_i, and on that span's complement.  realize_four_systems
measures each one from the module matrices and checks it against the
claimed parameter sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .drg import CheckFailure, q_frac
from .laurent import LaurentPoly
from .linalg import ExactMatrix, ExactVector, primitive_idempotents, restrict_operator
from .scalars import Scalar, imag_unit, q_power

__all__ = [
    "DualQKSeq",
    "ParamArray",
    "LeonardSystemData",
    "vertex_seq",
    "vertex_perp_seq",
    "clique_seq",
    "clique_perp_seq",
    "four_seqs",
    "formal_qp",
    "param_array",
    "intersection_numbers",
    "split_from_quotients",
    "f_value",
    "h_poly",
    "h_recurrence_coeffs",
    "m_values",
    "realize_system",
    "realize_four_systems",
    "SYSTEM_NAMES",
    "param_array_csv",
    "f_table_csv",
]

SYSTEM_NAMES = ("vertex", "vertex-perp", "clique", "clique-perp")


def _is_zero(x):
    if isinstance(x, int):
        return x == 0
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


@dataclass
class DualQKSeq:
    """Parameter sequence of a dual q-Krawtchouk Leonard system."""

    alpha: object
    alpha_star: object
    beta: object
    beta_star: object
    gamma: object
    d: int
    qp: object          # qp(r) = q**r in the coefficient field
    tau: object = None  # fixed square root of gamma/beta, when available

    def __post_init__(self):
        if _is_zero(self.beta) or _is_zero(self.beta_star) or _is_zero(self.gamma):
            raise ValueError("beta, beta*, gamma must be nonzero")
        if self.tau is not None and not (
            self.tau * self.tau == self.gamma / self.beta
        ):
            raise ValueError("tau^2 != gamma/beta")


@dataclass
class ParamArray:
    theta: list
    theta_star: list
    phi: list    # first split sequence, phi[i] is varphi_{i+1}
    phi2: list   # second split sequence
    seq: DualQKSeq = None

    @property
    def d(self):
        return len(self.theta) - 1

    def validate(self):
        d = self.d
        for i in range(d + 1):
            for j in range(i + 1, d + 1):
                if self.theta[i] == self.theta[j]:
                    raise CheckFailure("leonard.theta-distinct", f"({i},{j})")
                if self.theta_star[i] == self.theta_star[j]:
                    raise CheckFailure("leonard.theta-star-distinct", f"({i},{j})")
        for i, x in enumerate(self.phi):
            if _is_zero(x):
                raise CheckFailure("leonard.phi-nonzero", f"i={i + 1}")
        for i, x in enumerate(self.phi2):
            if _is_zero(x):
                raise CheckFailure("leonard.phi2-nonzero", f"i={i + 1}")


# -- the four parameter sequences attached to the module --------------------


def _base_params(e, D, qp):
    e = Fraction(e)
    q = qp(1)
    alpha = (qp(e) - 1) / (1 - q)
    beta = qp(e + D) / (q - 1)
    gamma = 1 / (1 - q)
    alpha_star = q * (1 + qp(e + D - 2)) / (1 - q)
    beta_star = (
        q * (1 + qp(e + D - 2)) * (1 + qp(e + D - 1)) / ((q - 1) * (1 + qp(e - 1)))
    )
    return alpha, alpha_star, beta, beta_star, gamma


def _tau_for(e, D, qp, imag):
    if imag is None:
        return None
    return imag * qp(-(Fraction(D) + Fraction(e)) / 2)


def vertex_seq(e, D, qp, imag=None):
    a, a_s, b, b_s, g = _base_params(e, D, qp)
    return DualQKSeq(a, a_s, b, b_s, g, D, qp, tau=_tau_for(e, D, qp, imag))


def vertex_perp_seq(e, D, qp, imag=None):
    a, a_s, b, b_s, g = _base_params(e, D, qp)
    tau = _tau_for(e, D, qp, imag)
    return DualQKSeq(
        a, a_s, b * qp(-1), b_s * qp(-1), g * qp(1), D - 2, qp,
        tau=None if tau is None else tau * qp(1),
    )


def clique_seq(e, D, qp, imag=None):
    e = Fraction(e)
    a, a_s, b, b_s, g = _base_params(e, D, qp)
    scale = (1 + qp(e - 1)) / (1 + qp(e))
    return DualQKSeq(a, a_s, b, b_s * scale, g, D - 1, qp, tau=_tau_for(e, D, qp, imag))


def clique_perp_seq(e, D, qp, imag=None):
    e = Fraction(e)
    a, a_s, b, b_s, g = _base_params(e, D, qp)
    scale = (1 + qp(e - 1)) / (1 + qp(e))
    tau = _tau_for(e, D, qp, imag)
    return DualQKSeq(
        a, a_s, b * qp(-1), b_s * scale, g * qp(1), D - 1, qp,
        tau=None if tau is None else tau * qp(1),
    )


def four_seqs(e, D, qp, imag=None):
    return {
        "vertex": vertex_seq(e, D, qp, imag),
        "vertex-perp": vertex_perp_seq(e, D, qp, imag),
        "clique": clique_seq(e, D, qp, imag),
        "clique-perp": clique_perp_seq(e, D, qp, imag),
    }


def formal_qp(r):
    return q_power(r)


# -- arrays, intersection numbers, weights -----------------------------------


def param_array(seq):
    d, qp = seq.d, seq.qp
    theta = [seq.alpha + seq.beta * qp(-i) + seq.gamma * qp(i) for i in range(d + 1)]
    theta_star = [seq.alpha_star + seq.beta_star * qp(-i) for i in range(d + 1)]
    phi = [
        seq.beta * seq.beta_star * qp(1 - 2 * i) * (1 - qp(i)) * (1 - qp(i - d - 1))
        for i in range(1, d + 1)
    ]
    phi2 = [
        seq.gamma * seq.beta_star * qp(d + 1 - 2 * i) * (1 - qp(i)) * (1 - qp(i - d - 1))
        for i in range(1, d + 1)
    ]
    pa = ParamArray(theta, theta_star, phi, phi2, seq)
    pa.validate()
    return pa


def split_from_quotients(theta_star, b, c):
    """Recover the split sequences from measured intersection numbers by
    inverting the standard quotient formulas."""
    d = len(theta_star) - 1
    phi = []
    for i in range(d):
        num = 1
        for h in range(i):
            num = num * (theta_star[i] - theta_star[h])
        den = 1
        for h in range(i + 1):
            den = den * (theta_star[i + 1] - theta_star[h])
        phi.append(b[i] * den / num)
    phi2 = []
    for i in range(1, d + 1):
        num = 1
        for h in range(i + 1, d + 1):
            num = num * (theta_star[i] - theta_star[h])
        den = 1
        for h in range(i, d + 1):
            den = den * (theta_star[i - 1] - theta_star[h])
        phi2.append(c[i] * den / num)
    return phi, phi2


def intersection_numbers(pa):
    """(a_i, b_i, c_i): quotient route and closed dual q-Krawtchouk route,
    checked against each other."""
    seq = pa.seq
    d, qp = pa.d, seq.qp
    b_closed = [seq.beta * (1 - qp(i - d)) for i in range(d + 1)]
    c_closed = [seq.gamma * (1 - qp(i)) for i in range(d + 1)]
    # quotient route from the split sequences
    for i in range(d):
        num = 1
        for h in range(i):
            num = num * (pa.theta_star[i] - pa.theta_star[h])
        den = 1
        for h in range(i + 1):
            den = den * (pa.theta_star[i + 1] - pa.theta_star[h])
        if pa.phi[i] * num / den != b_closed[i]:
            raise CheckFailure("leonard.b-route-disagreement", f"i={i}")
    for i in range(1, d + 1):
        num = 1
        for h in range(i + 1, d + 1):
            num = num * (pa.theta_star[i] - pa.theta_star[h])
        den = 1
        for h in range(i, d + 1):
            den = den * (pa.theta_star[i - 1] - pa.theta_star[h])
        if pa.phi2[i - 1] * num / den != c_closed[i]:
            raise CheckFailure("leonard.c-route-disagreement", f"i={i}")
    theta0 = pa.theta[0]
    a = [theta0 - b_closed[i] - c_closed[i] for i in range(d + 1)]
    return a, b_closed, c_closed


def f_value(seq, i, j):
    """f_i at the eigenvalue theta_j: the terminating hypergeometric sum with
    upper parameters (q^-i, q^-j, (gamma/beta) q^j), lower (0, q^-d)."""
    d, qp = seq.d, seq.qp
    ratio = seq.gamma / seq.beta
    total = 1
    term = 1
    for n in range(1, min(i, j) + 1):
        term = (
            term
            * (1 - qp(n - 1 - i))
            * (1 - qp(n - 1 - j))
            * (1 - ratio * qp(j + n - 1))
            * qp(1)
            / ((1 - qp(n)) * (1 - qp(n - 1 - d)))
        )
        total = total + term
    return total


def m_values(pa):
    """Weights m_i in closed form; they sum to 1."""
    seq = pa.seq
    d, qp = pa.d, seq.qp
    ratio_bg = seq.beta / seq.gamma
    out = []
    for i in range(d + 1):
        num = _poch(qp, qp(-d), i) * (1 - ratio_bg * qp(-2 * i))
        den = qp(i * (i - 1)) * _poch(qp, qp(1), i) * _poch(
            qp, ratio_bg * qp(-d - i), d + 1
        )
        out.append(ratio_bg**i * num / den)
    total = out[0]
    for x in out[1:]:
        total = total + x
    if not (total == 1):
        raise CheckFailure("leonard.m-values-sum", "sum m_i != 1")
    return out


def _poch(qp, r, n):
    out = 1
    for k in range(n):
        out = out * (1 - r * qp(k))
    return out


def h_poly(i, tau, d, qp):
    """Monic symmetric Laurent form of f_i: degree i down to -i in eta,
    parameters (tau, d)."""
    total = LaurentPoly({0: 1})
    term = LaurentPoly({0: 1})
    for n in range(1, i + 1):
        # (1 - tau q^(n-1) eta^-1)(1 - tau q^(n-1) eta)
        lin = LaurentPoly(
            {
                -1: -tau * qp(n - 1),
                0: 1 + tau * tau * qp(2 * (n - 1)),
                1: -tau * qp(n - 1),
            }
        )
        factor = (1 - qp(n - 1 - i)) * qp(1) / ((1 - qp(n)) * (1 - qp(n - 1 - d)))
        term = term * lin * factor
        total = total + term
    scale = _poch(qp, qp(-d), i) / tau**i
    return total * scale


def h_recurrence_coeffs(i, tau, d, qp):
    """(A_i, B_i) with eta-sum * h_i = h_{i+1} + A_i h_i + B_i h_{i-1}."""
    Ai = tau * qp(i) + qp(i - d) / tau
    Bi = (1 - qp(i - 1 - d)) * (1 - qp(i))
    return Ai, Bi


# -- realized systems ---------------------------------------------------------


@dataclass
class LeonardSystemData:
    name: str
    seq: DualQKSeq
    basis: list          # standard basis vectors inside the module
    A: ExactMatrix       # restriction of the adjacency operator
    Astar: ExactMatrix   # restriction of the (clique) dual adjacency operator
    E: list
    Estar: list
    u: ExactVector
    a: list
    b: list
    c: list
    m: list

    @property
    def d(self):
        return self.seq.d


def _diag_indicator(n, k):
    m = ExactMatrix.zeros(n, n)
    m.data[k, k] = 1
    return m


def realize_system(W, name):
    """Measure one of the four Leonard systems from the module matrices and
    verify the axioms and the claimed parameter sequence."""
    D = W.D
    e = W.e
    if W.backend == "formal":
        qp = formal_qp
        imag = imag_unit()
    else:
        def qp(r):
            return q_frac(W.q0, r)
        imag = None

    seqs = four_seqs(e, D, qp, imag)
    seq = seqs[name]
    if name == "vertex":
        basis = [W.dist_vector(i) for i in range(D + 1)]
        dual_op = W.Astar
        theta_idx = list(range(D + 1))
    elif name == "vertex-perp":
        basis = list(W.u_perp)
        dual_op = W.Astar
        theta_idx = list(range(1, D))
    elif name == "clique":
        basis = [W.clique_vector(i) for i in range(D)]
        dual_op = W.Astar_cl
        theta_idx = list(range(D))
    else:
        basis = list(W.u_perp_cl)
        dual_op = W.Astar_cl
        theta_idx = list(range(1, D + 1))

    d = seq.d
    A = restrict_operator(W.A, basis)
    Astar = restrict_operator(dual_op, basis)
    pa = param_array(seq)

    # the dual operator must be diagonal with the claimed dual eigenvalues
    for i in range(d + 1):
        for j in range(d + 1):
            want = pa.theta_star[i] if i == j else 0
            if not (Astar[i, j] == want):
                raise CheckFailure(
                    f"leonard.{name}.dual-diagonal", f"entry ({i},{j})"
                )
    # tridiagonal action with nonzero sub/superdiagonal
    a_m = [A[i, i] for i in range(d + 1)]
    b_m = [A[i, i + 1] for i in range(d)] + [0]
    c_m = [0] + [A[i + 1, i] for i in range(d)]
    for i in range(d + 1):
        for j in range(d + 1):
            if abs(i - j) > 1 and not _is_zero(A[i, j]):
                raise CheckFailure(f"leonard.{name}.tridiagonal", f"({i},{j})")
    for i in range(d):
        if _is_zero(b_m[i]) or _is_zero(c_m[i + 1]):
            raise CheckFailure(f"leonard.{name}.irreducible-tridiagonal", f"i={i}")

    thetas = [W.profile.theta[k] for k in theta_idx]
    if pa.theta != thetas:
        raise CheckFailure(f"leonard.{name}.eigenvalue-sequence")
    E = primitive_idempotents(A, thetas)
    Estar = [_diag_indicator(d + 1, k) for k in range(d + 1)]
    u = ExactVector([1] * (d + 1))
    if not (E[0] @ u == u):
        raise CheckFailure(f"leonard.{name}.designated-vector", "E_0 u != u")

    # closed-form intersection numbers match the measured tridiagonal entries
    a_c, b_c, c_c = intersection_numbers(pa)
    if not all(a_c[i] == a_m[i] for i in range(d + 1)):
        raise CheckFailure(f"leonard.{name}.intersection-a")
    if not all(b_c[i] == b_m[i] for i in range(d + 1)):
        raise CheckFailure(f"leonard.{name}.intersection-b")
    if not all(c_c[i] == c_m[i] for i in range(d + 1)):
        raise CheckFailure(f"leonard.{name}.intersection-c")

    # measured splits match the claimed closed forms
    phi_m, phi2_m = split_from_quotients(pa.theta_star, b_m, c_m)
    if not all(phi_m[i] == pa.phi[i] for i in range(d)):
        raise CheckFailure(f"leonard.{name}.first-split")
    if not all(phi2_m[i] == pa.phi2[i] for i in range(d)):
        raise CheckFailure(f"leonard.{name}.second-split")

    m = m_values(pa)
    sysdata = LeonardSystemData(
        name, seq, basis, A, Astar, E, Estar, u, a_c, b_c, c_c, m
    )
    _axiom_checks(sysdata, pa)
    return sysdata


def _axiom_checks(sys, pa):
    d = sys.d
    name = sys.name
    ident = ExactMatrix.identity(d + 1)
    # multiplicity-free pair with the orthogonality structure
    tot = ExactMatrix.zeros(d + 1, d + 1)
    for th, Ei in zip(pa.theta, sys.E):
        if not (sys.A @ Ei == Ei.scale(th)):
            raise CheckFailure(f"leonard.{name}.idempotents", "A E_i != theta_i E_i")
        tot = tot + Ei
    if tot != ident:
        raise CheckFailure(f"leonard.{name}.idempotents", "sum != I")
    # E_i A* E_j = 0 for |i-j| > 1
    for i in range(d + 1):
        for j in range(d + 1):
            if abs(i - j) > 1:
                if not (sys.E[i] @ sys.Astar @ sys.E[j]).is_zero():
                    raise CheckFailure(
                        f"leonard.{name}.tridiagonal-dual", f"({i},{j})"
                    )
    # normalizers: v_i(theta_0) = b_0...b_{i-1} / (c_1...c_i), via the
    # recurrence-generated polynomials evaluated at theta_0
    vs = _v_polys(sys)
    th0 = pa.theta[0]
    acc_b, acc_c = 1, 1
    for i in range(1, d + 1):
        acc_b = acc_b * sys.b[i - 1]
        acc_c = acc_c * sys.c[i]
        val = _poly_eval(vs[i], th0)
        if not (val == acc_b / acc_c):
            raise CheckFailure(f"leonard.{name}.normalizer", f"i={i}")
    # f_i(theta_j) from the recurrence matches the hypergeometric sum
    for i in range(d + 1):
        vi0 = _poly_eval(vs[i], th0)
        for j in range(d + 1):
            lhs = _poly_eval(vs[i], pa.theta[j]) / vi0
            if not (lhs == f_value(sys.seq, i, j)):
                raise CheckFailure(f"leonard.{name}.f-values", f"(i,j)=({i},{j})")
    # weights: m_i = trace(E_i E*_0) and E*_0 E_i E*_0 = m_i E*_0
    E0s = sys.Estar[0]
    for i, mi in enumerate(sys.m):
        prod = sys.E[i] @ E0s
        if not (prod.trace() == mi):
            raise CheckFailure(f"leonard.{name}.m-trace", f"i={i}")
        if not (E0s @ prod == E0s.scale(mi)):
            raise CheckFailure(f"leonard.{name}.m-compression", f"i={i}")


def _v_polys(sys):
    """Coefficient lists of the recurrence polynomials v_i."""
    d = sys.d
    vs = [[1]]
    for i in range(d):
        # xi v_i = b_{i-1} v_{i-1} + a_i v_i + c_{i+1} v_{i+1}
        nxt = [0] * (i + 2)
        for k, cv in enumerate(vs[i]):
            nxt[k + 1] = nxt[k + 1] + cv
            nxt[k] = nxt[k] - sys.a[i] * cv
        if i >= 1:
            for k, cv in enumerate(vs[i - 1]):
                nxt[k] = nxt[k] - sys.b[i - 1] * cv
        ci = sys.c[i + 1]
        vs.append([x / ci for x in nxt])
    return vs


def _poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def realize_four_systems(W):
    out = {}
    for name in SYSTEM_NAMES:
        out[name] = realize_system(W, name)
    # orthogonal decompositions: (D+1) + (D-1) = 2D and D + D = 2D
    dims = {n: s.d + 1 for n, s in out.items()}
    if dims["vertex"] + dims["vertex-perp"] != 2 * W.D:
        raise CheckFailure("leonard.decomposition-x")
    if dims["clique"] + dims["clique-perp"] != 2 * W.D:
        raise CheckFailure("leonard.decomposition-clique")
    return out


# -- CSV emission -------------------------------------------------------------


def param_array_csv(e, D):
    """Parameter arrays of the four systems over formal q: one row per
    sequence entry (system, array, i, value)."""
    lines = ["system,array,i,value"]
    for name, seq in four_seqs(e, D, formal_qp, imag_unit()).items():
        pa = param_array(seq)
        for label, arr in (
            ("alpha", [seq.alpha]),
            ("alpha_star", [seq.alpha_star]),
            ("beta", [seq.beta]),
            ("beta_star", [seq.beta_star]),
            ("gamma", [seq.gamma]),
            ("d", [seq.d]),
            ("theta", pa.theta),
            ("theta_star", pa.theta_star),
            ("phi", pa.phi),
            ("phi2", pa.phi2),
        ):
            for i, v in enumerate(arr):
                lines.append(f"{name},{label},{i},\"{v}\"")
    return "\n".join(lines) + "\n"


def f_table_csv(e, D, system="vertex"):
    """Exact f_i(theta_j) table for one system over formal q."""
    seq = four_seqs(e, D, formal_qp, imag_unit())[system]
    lines = ["i,j,value"]
    for i in range(seq.d + 1):
        for j in range(seq.d + 1):
            lines.append(f'{i},{j},"{f_value(seq, i, j)}"')
    return "\n".join(lines) + "\n"
