"""Laurent coefficients, singular-series weights and main-term polynomials.

The generating function of tau3 twisted by a primitive additive character
e_q(an) has a triple pole at s = 1 whose Laurent coefficients A(q), B(q),
C(q) drive every main term in this package.  Writing gamma0 for the 0-th
generalized Stieltjes constant, they are

    A = q^-2 sum_{a,b,g <= q} e_q(x*a*b*g),
    B = same sum weighted by 3*gamma0(a/q) - 3*log q,
    C = same sum weighted by 3*gamma0(a/q)*gamma0(b/q) - 3*gamma1(a/q)
        - 9*gamma0(a/q)*log q + (9/2)*log^2 q,

for any x coprime to q.  The weights fall out of the Hurwitz-zeta
factorisation E(s) = q^{-3s} sum e_q(x*a*b*g) zeta(s,a/q) zeta(s,b/q)
zeta(s,g/q) expanded at s = 1: each factor contributes 1/(s-1) + gamma0 -
gamma1*(s-1) + ..., so the simple-pole coefficient picks up the first
generalized Stieltjes constant gamma1(a/q) as well (at q = 1 this is the
classical C = 3*gamma^2 - 3*gamma_1 of zeta^3; dropping it shifts every
constant-order main term by about 0.218 per unit length, which the
correlation and variance trend checks immediately expose).

Summing the inner geometric sum first collapses the
triple sum to pairs (a, b) with q | a*b, which proves a-independence
structurally and cuts the cost to O(q) per modulus:

    sum_g e_q(x*a*b*g) = q * [q | a*b],

so A = (1/q) * sum_a gcd(a, q), and the B/C weights attach to the surviving
pairs, the b-sum running over the gcd(a, q) multiples of q/gcd(a, q).  The
naive O(q^3) complex triple sum is retained as an oracle.

From A, B, C come the six quadratic weights w_1..w_6 multiplying the
log-power sums T_1..T_6 in the truncated singular series

    S_Delta(k, N) = sum_{q <= Delta} q^-2 c_q(|k|) W_q(k, N),

the expected value of the shifted correlation sum, and the residue main
terms: the cumulative phase sum has main term n*p(log n)/q with
p(x) = (A/2) x^2 - (A-B) x + (A-B+C), and the progression version uses the
divisor-averaged coefficients A~(l,b) = l^-1 sum_{q | l} q^-1 c_q(b) A(q)
(same for B~, C~).

Density note: the weight attached to each n inside the exponential sum F is
the increment of the cumulative main term,

    d/dn [n p(log n)] / q = ((A/2) log^2 n + B log n + C) / q,

not p(log n)/q itself.  The distinction is an O(1/log n) relative effect
that vanishes asymptotically but is a ~40% effect on W_q at desk scale;
with the cumulative polynomial in the density slot the second moment of
V - S_Delta grows a full power of N too fast.  The density form makes
S_Delta the actual expected value (the trend checks pin this down), and the
quadratic grouping is then

    w = (a^2, ab, b^2, ac, bc, c^2),   a = A/2, b = B, c = C,

paired with T_1..T_6 below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import divisors, ramanujan_sum, sieve
from .constants import STIELTJES_GAMMA1, digamma, stieltjes1
from .errors import InternalConsistencyError

ORACLE_Q_MAX = 64


@dataclass(frozen=True)
class LaurentCoeffs:
    q: int
    A: float
    B: float
    C: float


@dataclass(frozen=True)
class WeightVector:
    """Quadratic weights (w_1..w_6) pairing with the log-power sums T_1..T_6."""

    q: int
    w: tuple[float, float, float, float, float, float]


@dataclass(frozen=True)
class EMTCoeffs:
    ell: int
    b: int
    A_tilde: float
    B_tilde: float
    C_tilde: float


@dataclass(frozen=True)
class MainTermPoly:
    """Polynomial in log N; scale 'per_n' means the value is N * P(log N)."""

    degree: int
    coeffs: tuple[float, ...]  # low order first: (log N)^0 .. (log N)^degree
    scale: str = "per_n"

    def poly(self, log_n: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * log_n + c
        return acc

    def evaluate(self, n: float) -> float:
        p = self.poly(math.log(n))
        return n * p if self.scale == "per_n" else p


def _gamma0_vector(q: int) -> np.ndarray:
    """gamma0(a/q) for a = 1..q."""
    return -digamma(np.arange(1, q + 1, dtype=float) / q)


def _gamma1_vector(q: int) -> np.ndarray:
    """gamma1(a/q) for a = 1..q."""
    out = stieltjes1(np.arange(1, q + 1, dtype=float) / q)
    return np.atleast_1d(out)


@lru_cache(maxsize=4096)
def laurent_coeffs(q: int) -> LaurentCoeffs:
    """A(q), B(q), C(q) by the collapsed pair sum; O(q) per modulus."""
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    if q == 1:
        g = -float(digamma(1.0))
        return LaurentCoeffs(1, 1.0, 3.0 * g, 3.0 * g * g - 3.0 * STIELTJES_GAMMA1)
    logq = math.log(q)
    alphas = np.arange(1, q + 1, dtype=np.int64)
    gcds = np.gcd(alphas, q)
    g0 = _gamma0_vector(q)
    g1 = _gamma1_vector(q)
    a_sum = float(gcds.sum())
    s1 = float(np.sum(g0 * gcds))
    s1_g1 = float(np.sum(g1 * gcds))
    # For each alpha the b-sum runs over multiples of q/g, so the C cross
    # term needs Gamma(g) = sum_{j <= g} gamma0(j/g) per divisor g of q.
    gamma_sums = {d: float(np.sum(_gamma0_vector(d))) for d in divisors(q)}
    lut = np.zeros(q + 1, dtype=float)
    for d, val in gamma_sums.items():
        lut[d] = val
    s_cross = float(np.sum(g0 * lut[gcds]))
    A = a_sum / q
    B = 3.0 * s1 / q - 3.0 * logq * A
    C = (
        3.0 * s_cross / q
        - 3.0 * s1_g1 / q
        - 9.0 * logq * s1 / q
        + 4.5 * logq * logq * A
    )
    return LaurentCoeffs(q, A, B, C)


def laurent_table(q_max: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """A(q), B(q), C(q) for every q <= q_max in O(q_max log q_max).

    Batch route built on exact identities: the Gauss digamma sum and its
    gamma_1 analogue (both from sum_r zeta(s, r/q) = q^s zeta(s)),

        sum_{j<=g} gamma0(j/g) = g*(gamma + log g),
        sum_{j<=g} gamma1(j/g) = g*(gamma_1 - gamma*log g - log^2 g / 2),

    Moebius-inverted over reduced fractions,

        Scop(d)  = sum_{u<=d, (u,d)=1} gamma0(u/d)
                 = sum_{e|d} mu(d/e) e (gamma + log e),
        Scop1(d) = likewise with the gamma_1 sum,

    which turn every alpha-sum into divisor convolutions.  Cross-checked
    against laurent_coeffs (digamma route) and the triple-sum oracle in the
    tests.
    """
    if q_max < 1:
        raise ValueError(f"q_max must be >= 1, got {q_max}")
    n = q_max
    gamma = -float(digamma(1.0))
    g1c = STIELTJES_GAMMA1
    mu = sieve("mu", n).values
    phi = sieve("phi", n).values

    qs = np.arange(n + 1, dtype=float)
    logs = np.log(np.maximum(qs, 1.0))

    scop = np.zeros(n + 1)
    scop1 = np.zeros(n + 1)
    for e in range(1, n + 1):
        head = mu[1 : n // e + 1]
        scop[e::e] += head * (e * (gamma + logs[e]))
        scop1[e::e] += head * (e * (g1c - gamma * logs[e] - 0.5 * logs[e] ** 2))

    a_arr = np.zeros(n + 1)
    for d in range(1, n + 1):
        a_arr[d::d] += phi[d] / d

    s1 = np.zeros(n + 1)
    s1_g1 = np.zeros(n + 1)
    s_cross = np.zeros(n + 1)
    for g in range(1, n + 1):
        m = n // g
        s1[g::g] += g * scop[1 : m + 1]
        s1_g1[g::g] += g * scop1[1 : m + 1]
        s_cross[g::g] += g * (gamma + logs[g]) * scop[1 : m + 1]

    q_safe = np.maximum(qs, 1.0)
    b_arr = 3.0 * s1 / q_safe - 3.0 * logs * a_arr
    c_arr = (
        3.0 * s_cross / q_safe
        - 3.0 * s1_g1 / q_safe
        - 9.0 * logs * s1 / q_safe
        + 4.5 * logs * logs * a_arr
    )
    a_arr[0] = b_arr[0] = c_arr[0] = 0.0
    return a_arr, b_arr, c_arr


def laurent_coeffs_oracle(q: int, a: int) -> LaurentCoeffs:
    """Naive O(q^3) complex triple sum; q <= 64.

    Sums the raw exponentials with no arithmetic shortcuts, so it is an
    independent witness for both the pair-sum collapse and a-independence.
    """
    if not 1 <= q <= ORACLE_Q_MAX:
        raise ValueError(f"oracle restricted to 1 <= q <= {ORACLE_Q_MAX}, got {q}")
    if math.gcd(a, q) != 1:
        raise ValueError(f"need gcd(a, q) = 1, got a={a}, q={q}")
    logq = math.log(q)
    roots = np.exp(2j * math.pi * np.arange(q) / q)
    r = np.arange(1, q + 1, dtype=np.int64)
    triple = np.multiply.outer(np.multiply.outer(r, r), r)
    phases = roots[(a * triple) % q]
    e_ab = phases.sum(axis=2)  # sum over the third index, kept literal
    g0 = _gamma0_vector(q)
    g1 = _gamma1_vector(q)
    wb = 3.0 * g0 - 3.0 * logq
    wc = (
        3.0 * np.multiply.outer(g0, g0)
        - 3.0 * g1[:, None]
        - 9.0 * logq * g0[:, None]
        + 4.5 * logq * logq
    )
    za = e_ab.sum()
    zb = (wb[:, None] * e_ab).sum()
    zc = (wc * e_ab).sum()
    tol = 1e-8 * q**3
    for name, z in (("A", za), ("B", zb), ("C", zc)):
        if abs(z.imag) > tol:
            raise InternalConsistencyError(
                f"oracle {name}({q}) imaginary residue {z.imag:.3e} exceeds {tol:.3e}"
            )
    q2 = float(q * q)
    return LaurentCoeffs(q, za.real / q2, zb.real / q2, zc.real / q2)


def weights(q: int) -> WeightVector:
    """The six quadratic weights from A(q), B(q), C(q).

    With the density weight (A/2) x^2 + B x + C (module docstring) these are
    (a^2, ab, b^2, ac, bc, c^2) for a = A/2, b = B, c = C.
    """
    lc = laurent_coeffs(q)
    a = lc.A / 2.0
    b = lc.B
    c = lc.C
    return WeightVector(q, (a * a, a * b, b * b, a * c, b * c, c * c))


def t_sums(n_max: int, k: int) -> tuple[float, float, float, float, float, float]:
    """T_1..T_6 at shift k: exact sums over n = 1..N-|k|.

    T_1 = sum log^2 n log^2(n+k)          T_4 = sum (log^2 n + log^2(n+k))
    T_2 = sum log n log(n+k) log(n(n+k))  T_5 = sum log(n(n+k))
    T_3 = sum log n log(n+k)              T_6 = N - |k|

    Accumulated in ascending n with exactly rounded summation (math.fsum).
    """
    k = abs(k)
    if not 0 <= k <= n_max - 1:
        raise ValueError(f"need 0 <= |k| <= N-1, got k={k}, N={n_max}")
    m = n_max - k
    ln = np.log(np.arange(1, m + 1, dtype=float))
    lnk = np.log(np.arange(1 + k, n_max + 1, dtype=float))
    t1 = math.fsum(ln * ln * lnk * lnk)
    t2 = math.fsum(ln * lnk * (ln + lnk))
    t3 = math.fsum(ln * lnk)
    t4 = math.fsum(ln * ln + lnk * lnk)
    t5 = math.fsum(ln + lnk)
    return (t1, t2, t3, t4, t5, float(m))


def t_sum_profiles(n_max: int, threads: int = 1) -> np.ndarray:
    """T_j(k, N) for all k = 0..N-1 as a (6, N) array.

    T_4, T_5, T_6 come from prefix sums; the cross sums T_1..T_3 are pairwise
    numpy reductions per k (deterministic order, independent of threading).
    Per-k values are written into disjoint slots, so the k-chunks can run on
    a thread pool without affecting the result.
    """
    n = n_max
    ln = np.log(np.arange(1, n + 1, dtype=float))
    ln2 = ln * ln
    p1 = np.concatenate(([0.0], np.cumsum(ln)))
    p2 = np.concatenate(([0.0], np.cumsum(ln2)))
    out = np.empty((6, n), dtype=float)
    ks = np.arange(n)
    ms = n - ks
    out[5] = ms
    out[4] = p1[ms] + (p1[n] - p1[ks])
    out[3] = p2[ms] + (p2[n] - p2[ks])

    def fill(lo: int, hi: int) -> None:
        for k in range(lo, hi):
            m = n - k
            x, x2 = ln[:m], ln2[:m]
            y, y2 = ln[k:], ln2[k:]
            xy = x * y
            out[0, k] = float(np.sum(x2 * y2))
            out[1, k] = float(np.sum(xy * (x + y)))
            out[2, k] = float(np.sum(xy))

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        bounds = np.linspace(0, n, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, bounds[:-1], bounds[1:]))
    else:
        fill(0, n)
    return out


def density_weight(q: int, n_max: int) -> np.ndarray:
    """The per-n weight ((A/2) log^2 n + B log n + C) for n = 1..n_max."""
    lc = laurent_coeffs(q)
    ln = np.log(np.arange(1, n_max + 1, dtype=float))
    return (lc.A / 2.0) * ln * ln + lc.B * ln + lc.C


def weight_pair_sum(q: int, k: int, n_max: int) -> float:
    """sum_n weight(n) weight(n+|k|) with the per-n density weight.

    Independent quadratic-form oracle for the w/T grouping: this is the
    coefficient of e(alpha*k) in |q * F(alpha, a/q, N)|^2 before any
    regrouping.
    """
    k = abs(k)
    w = density_weight(q, n_max)
    m = n_max - k
    return math.fsum(w[:m] * w[k:])


def w_dot_t(q: int, k: int, n_max: int) -> float:
    """W_q(k, N) reconstructed as sum_j w_j(q) T_j(k, N)."""
    wv = weights(q).w
    ts = t_sums(n_max, k)
    return math.fsum(wj * tj for wj, tj in zip(wv, ts))


def _cq_profile(q: int, kmax: int) -> np.ndarray:
    """c_q(k) for k = 0..kmax via gcd classes (c_q(0) = phi(q))."""
    lut = np.zeros(q + 1, dtype=np.int64)
    for d in divisors(q):
        lut[d] = ramanujan_sum(q, d)
    return lut[np.gcd(np.arange(kmax + 1, dtype=np.int64), q)]


def s_delta(n_max: int, delta: int, k: int) -> float:
    """S_Delta(k, N) = sum_{q <= Delta} q^-2 c_q(|k|) W_q(k, N), scalar route."""
    if delta < 1:
        raise ValueError(f"Delta must be >= 1, got {delta}")
    terms = [
        ramanujan_sum(q, k) / (q * q) * w_dot_t(q, k, n_max)
        for q in range(1, delta + 1)
    ]
    return math.fsum(terms)


def s_delta_profile(
    n_max: int,
    delta: int,
    threads: int = 1,
    profiles: np.ndarray | None = None,
) -> np.ndarray:
    """S_Delta(k, N) for all k = 0..N-1 in O(N * Delta) after the T profiles.

    Iterates q ascending, pairs the gcd-class Ramanujan values with the
    weighted T profiles, and accumulates contributions in fixed q order, so
    the result is independent of the thread count.
    """
    if delta < 1:
        raise ValueError(f"Delta must be >= 1, got {delta}")
    if profiles is None:
        profiles = t_sum_profiles(n_max, threads=threads)

    def contribution(q: int) -> np.ndarray:
        wv = np.array(weights(q).w)
        combo = wv @ profiles
        return (_cq_profile(q, n_max - 1) / float(q * q)) * combo

    qs = list(range(1, delta + 1))
    if threads > 1 and len(qs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(contribution, qs))
    else:
        parts = [contribution(q) for q in qs]
    out = np.zeros(n_max)
    for part in parts:  # ascending q, fixed merge order
        out += part
    return out


def emt_coeffs(ell: int, b: int) -> EMTCoeffs:
    """Divisor-averaged Laurent coefficients for the progression (b mod ell)."""
    if ell < 1:
        raise ValueError(f"modulus must be positive, got {ell}")
    at = bt = ct = 0.0
    for q in divisors(ell):
        cq = ramanujan_sum(q, b)
        if cq == 0:
            continue
        lc = laurent_coeffs(q)
        at += cq / q * lc.A
        bt += cq / q * lc.B
        ct += cq / q * lc.C
    return EMTCoeffs(ell, b, at / ell, bt / ell, ct / ell)


def emt_poly(ell: int, b: int) -> MainTermPoly:
    """Expected-main-term polynomial: per-n P_2 with
    P_2(x) = (A~/2) x^2 - (A~-B~) x + (A~-B~+C~)."""
    co = emt_coeffs(ell, b)
    return MainTermPoly(
        degree=2,
        coeffs=(
            co.A_tilde - co.B_tilde + co.C_tilde,
            -(co.A_tilde - co.B_tilde),
            co.A_tilde / 2.0,
        ),
        scale="per_n",
    )


def residue_main_term(q: int, n: int) -> float:
    """n/q * (A/2 log^2 n - (A-B) log n + (A-B+C)) for the phase a/q."""
    if n < 1 or q < 1:
        raise ValueError("residue_main_term needs n >= 1 and q >= 1")
    lc = laurent_coeffs(q)
    ln = math.log(n)
    return n / q * ((lc.A / 2.0) * ln * ln - (lc.A - lc.B) * ln + (lc.A - lc.B + lc.C))


def bound_ratios(q_max: int) -> dict[str, float]:
    """max over q <= q_max of |A|/log^2(q+1), |B|/log^3(q+1), |C|/log^4(q+1).

    Finite measured constants for the logarithmic growth of the Laurent
    coefficients.
    """
    a_arr, b_arr, c_arr = laurent_table(q_max)
    qs = np.arange(1, q_max + 1, dtype=float)
    lg = np.log(qs + 1.0)
    return {
        "q_max": float(q_max),
        "kappa_A": float(np.max(np.abs(a_arr[1:]) / lg**2)),
        "kappa_B": float(np.max(np.abs(b_arr[1:]) / lg**3)),
        "kappa_C": float(np.max(np.abs(c_arr[1:]) / lg**4)),
    }
