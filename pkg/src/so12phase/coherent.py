"""The three coherent-state families of the positive discrete series.

Lowering-operator eigenstates (parameter z over the whole plane),
displacement-operator states (parameter lambda in the unit disc), and
eigenstates of the composite oscillator annihilation operator (parameter
alpha).  Every closed-form statistic here has a truncated-matrix
counterpart in the tests; state vectors grow their cutoff geometrically
until the tail norm falls below TAIL_TOL.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from . import special_fn as sf
from .quadrature import gauss_legendre_panels

TAIL_TOL = 1e-8
MAX_CUTOFF = 2048


class CutoffExhausted(RuntimeError):
    """Tail norm still above tolerance at the maximum basis size."""


@dataclass(frozen=True)
class BGState:
    """Eigenstate of the lowering operator K- with eigenvalue z."""

    k: float
    z: complex

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("k must be positive")
        object.__setattr__(self, "z", complex(self.z))

    @property
    def modulus(self) -> float:
        return abs(self.z)

    @property
    def phase(self) -> float:
        return cmath.phase(self.z) if self.z != 0 else 0.0


@dataclass(frozen=True)
class PerelomovState:
    """Displacement-operator state; lambda lives strictly inside the unit
    disc and shares its phase with the displacement parameter w, with
    |lambda| = tanh(|w|/2)."""

    k: float
    lam: complex
    w: complex = field(init=False)

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("k must be positive")
        lam = complex(self.lam)
        if abs(lam) >= 1.0:
            raise ValueError("|lambda| must be < 1")
        object.__setattr__(self, "lam", lam)
        mod = abs(lam)
        w_mod = 2.0 * math.atanh(mod)
        phase = cmath.phase(lam) if lam != 0 else 0.0
        object.__setattr__(self, "w", w_mod * cmath.exp(1j * phase))

    @classmethod
    def from_w(cls, k: float, w: complex) -> "PerelomovState":
        w = complex(w)
        lam = math.tanh(abs(w) / 2.0) * (cmath.exp(1j * cmath.phase(w)) if w != 0 else 1.0)
        return cls(k, lam)

    @property
    def modulus(self) -> float:
        return abs(self.lam)

    @property
    def theta(self) -> float:
        return cmath.phase(self.lam) if self.lam != 0 else 0.0


@dataclass(frozen=True)
class SGState:
    """Eigenstate of the composite annihilation operator; mean quantum
    number |alpha|^2 independent of k."""

    k: float
    alpha: complex

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("k must be positive")
        object.__setattr__(self, "alpha", complex(self.alpha))

    @property
    def modulus(self) -> float:
        return abs(self.alpha)

    @property
    def beta(self) -> float:
        return cmath.phase(self.alpha) if self.alpha != 0 else 0.0


@dataclass(frozen=True)
class StateVector:
    """Coefficients over |k,n> with the neglected tail norm."""

    k: float
    coeffs: np.ndarray
    tail_norm: float

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))

    @property
    def cutoff(self) -> int:
        return len(self.coeffs)

    def norm_defect(self) -> float:
        return abs(float(np.sum(np.abs(self.coeffs) ** 2)) + self.tail_norm ** 2 - 1.0)


def _grow_until_tail(log_weight, cutoff, family_phase):
    """Assemble normalized coefficients from log|c_n| values, growing the
    basis geometrically until the tail norm estimate drops below TAIL_TOL.

    The tail is bounded by a geometric envelope from the last two weights;
    the naive 1 - sum(|c_n|^2) would bottom out at sqrt(eps) ~ 1.5e-8.
    """
    n_dim = max(cutoff, 8)
    while True:
        logw = log_weight(np.arange(n_dim))
        amps = np.exp(logw) * family_phase(np.arange(n_dim))
        norms = np.abs(amps) ** 2
        if norms[-1] == 0.0 and norms[-2] == 0.0:
            return amps, 0.0  # exactly finite support (parameter zero)
        ratio = norms[-1] / norms[-2] if norms[-2] > 0 else np.inf
        if ratio < 0.75:
            tail_norm = math.sqrt(norms[-1] * ratio / (1.0 - ratio))
            if tail_norm < TAIL_TOL:
                return amps, tail_norm
        if n_dim >= MAX_CUTOFF:
            raise CutoffExhausted(
                f"tail norm above {TAIL_TOL:g} at cutoff {MAX_CUTOFF}")
        n_dim = min(MAX_CUTOFF, 2 * n_dim)


def bg_amplitudes(state: BGState, cutoff: int = 64) -> StateVector:
    """Coefficients z^n / sqrt((2k)_n n! g_k(|z|^2)), built in log domain."""
    k = state.k
    r2 = state.modulus ** 2
    log_norm = sf.log_g_k(k, r2)
    phase = cmath.exp(1j * state.phase)

    def log_weight(n):
        n = np.asarray(n, dtype=float)
        if r2 == 0:
            return np.where(n == 0, 0.0, -np.inf)
        return (0.5 * n * math.log(r2)
                - 0.5 * (gammaln(2 * k + n) - math.lgamma(2 * k))
                - 0.5 * gammaln(n + 1.0)
                - 0.5 * log_norm)

    amps, tail = _grow_until_tail(log_weight, cutoff, lambda n: phase ** n)
    return StateVector(k, amps, tail)


def perelomov_amplitudes(state: PerelomovState, cutoff: int = 64) -> StateVector:
    """Coefficients (1-|lam|^2)^k sqrt((2k)_n/n!) lam^n."""
    k = state.k
    r = state.modulus
    phase = cmath.exp(1j * state.theta)

    def log_weight(n):
        n = np.asarray(n, dtype=float)
        base = k * math.log1p(-r * r)
        if r == 0:
            return np.where(n == 0, base, -np.inf)
        return (base + n * math.log(r)
                + 0.5 * (gammaln(2 * k + n) - math.lgamma(2 * k))
                - 0.5 * gammaln(n + 1.0))

    amps, tail = _grow_until_tail(log_weight, cutoff, lambda n: phase ** n)
    return StateVector(k, amps, tail)


def sg_amplitudes(state: SGState, cutoff: int = 64) -> StateVector:
    """Coefficients e^{-|alpha|^2/2} alpha^n / sqrt(n!)."""
    r = state.modulus
    phase = cmath.exp(1j * state.beta)

    def log_weight(n):
        n = np.asarray(n, dtype=float)
        if r == 0:
            return np.where(n == 0, 0.0, -np.inf)
        return (-0.5 * r * r + n * math.log(r)
                - 0.5 * gammaln(n + 1.0))

    amps, tail = _grow_until_tail(log_weight, cutoff, lambda n: phase ** n)
    return StateVector(state.k, amps, tail)


def amplitudes(state, cutoff: int = 64) -> StateVector:
    if isinstance(state, BGState):
        return bg_amplitudes(state, cutoff)
    if isinstance(state, PerelomovState):
        return perelomov_amplitudes(state, cutoff)
    if isinstance(state, SGState):
        return sg_amplitudes(state, cutoff)
    raise TypeError(f"not a coherent state: {state!r}")


def inv_sqrt_k0_expectation(k: float, z_mod: float) -> float:
    """<(K0+k)^{-1/2}> in a lowering-eigenstate of modulus |z|: the direct
    series for |z| <= 20, else the Laplace-transform integral evaluated in
    log domain (substituting t = s^2 removes the endpoint singularity)."""
    if z_mod == 0.0:
        return 1.0 / math.sqrt(2.0 * k)
    r2 = z_mod * z_mod
    if z_mod <= 20.0:
        # sum of |z|^{2n} / (sqrt(2k+n) (2k)_n n!), normalized by g_k
        log_norm = sf.log_g_k(k, r2)
        acc = 0.0
        log_t = 0.0
        n = 0
        while True:
            term = math.exp(log_t - log_norm) / math.sqrt(2.0 * k + n)
            acc += term
            if n > 4 and term < 1e-17 * acc:
                break
            log_t += math.log(r2) - math.log(2.0 * k + n) - math.log(n + 1.0)
            n += 1
            if n > sf.SERIES_MAX_TERMS:
                break
        return acc
    log_norm = sf.log_g_k(k, r2)

    def integrand(s):
        s = np.asarray(s)
        inner = np.array([sf.log_g_k(k, r2 * math.exp(-v * v)) for v in s])
        return 2.0 * np.exp(-2.0 * k * s * s + inner - log_norm)

    val, _ = gauss_legendre_panels(integrand, 0.0, math.sqrt(40.0), panels=8)
    return float(np.real(val)) / math.sqrt(math.pi)


def bg_expectations(k: float, z) -> dict:
    """Closed-form moments of K0, K1, K2 and the number operator in a
    lowering-operator eigenstate.  Mandel's Q and the ratio R are reported
    as None at z = 0 where the mean quantum number vanishes."""
    z = complex(z)
    r = abs(z)
    phi = cmath.phase(z) if z != 0 else 0.0
    rho = sf.rho_k(k, r)
    k0 = k + r * rho
    k0_sq = k * k + r * r + r * rho
    var_k0 = r * r * (1.0 - rho * rho) + (1.0 - 2.0 * k) * r * rho
    nbar = r * rho
    var_n = var_k0
    if nbar > 0:
        ratio_r = 1.0 / rho ** 2 - 2.0 * k / (r * rho) - 1.0
        q = r * (1.0 / rho - rho) - 2.0 * k
    else:
        ratio_r = None
        q = None
    k1 = r * math.cos(phi)
    k2 = -r * math.sin(phi)
    k1_sq = r * r * math.cos(phi) ** 2 + 0.5 * k0
    k2_sq = r * r * math.sin(phi) ** 2 + 0.5 * k0
    inv_sqrt = inv_sqrt_k0_expectation(k, r)
    return {
        "K0": k0,
        "K0_sq": k0_sq,
        "var_K0": var_k0,
        "Nbar": nbar,
        "var_N": var_n,
        "R": ratio_r,
        "Q": q,
        "K1": k1,
        "K2": k2,
        "K1_sq": k1_sq,
        "K2_sq": k2_sq,
        "var_K1": 0.5 * k0,
        "var_K2": 0.5 * k0,
        "anticomm_K1K2": -r * r * math.sin(2.0 * phi),
        "S_corr": 0.0,
        "E_inv": rho / r if r > 0 else 1.0 / (2.0 * k),
        "a_expect": z * inv_sqrt,
    }


def bg_overlap(k: float, z2, z1) -> complex:
    """<k,z2|k,z1> = g_k(conj(z2) z1) / sqrt(g_k(|z2|^2) g_k(|z1|^2))."""
    z1, z2 = complex(z1), complex(z2)
    num = sf.g_k(k, np.conj(z2) * z1).value
    log_den = 0.5 * (sf.log_g_k(k, abs(z2) ** 2) + sf.log_g_k(k, abs(z1) ** 2))
    return num * math.exp(-log_den)


def bg_number_prob(k: float, z, n: int) -> float:
    """|z|^{2n} / ((2k)_n n! g_k(|z|^2)), a normalized distribution in n."""
    r2 = abs(complex(z)) ** 2
    if r2 == 0.0:
        return 1.0 if n == 0 else 0.0
    logp = (n * math.log(r2) - sf.log_pochhammer(2.0 * k, n)
            - math.lgamma(n + 1.0) - sf.log_g_k(k, r2))
    return math.exp(logp)


def perelomov_expectations(k: float, lam) -> dict:
    """Closed-form moments in a displacement-operator state."""
    lam = complex(lam)
    r = abs(lam)
    if r >= 1.0:
        raise ValueError("|lambda| must be < 1")
    th = cmath.phase(lam) if lam != 0 else 0.0
    denom = 1.0 - r * r
    k0 = k * (1.0 + r * r) / denom
    var_k0 = 2.0 * k * r * r / denom ** 2
    k0_sq = k0 * k0 + var_k0
    nbar = k0 - k
    var_n = var_k0
    one_plus = abs(1.0 + lam * lam) ** 2
    one_minus = abs(1.0 - lam * lam) ** 2
    k1 = 2.0 * k * r * math.cos(th) / denom
    k2 = -2.0 * k * r * math.sin(th) / denom
    var_k1 = 0.5 * k * one_plus / denom ** 2
    var_k2 = 0.5 * k * one_minus / denom ** 2
    s_corr = -k * r * r * math.sin(2.0 * th) / denom ** 2
    return {
        "K0": k0,
        "K0_sq": k0_sq,
        "var_K0": var_k0,
        "Nbar": nbar,
        "var_N": var_n,
        "R": 1.0 / (2.0 * k),
        "Q": nbar / (2.0 * k) if nbar > 0 else None,
        "K1": k1,
        "K2": k2,
        "K1_sq": var_k1 + k1 * k1,
        "K2_sq": var_k2 + k2 * k2,
        "var_K1": var_k1,
        "var_K2": var_k2,
        "S_corr": s_corr,
        "sum_sq_identity": k1 * k1 + k2 * k2 - (k0 * k0 - k * k),
        "fluct_identity": var_k1 + var_k2 - (var_k0 + k),
        "schwarz_defect": var_k1 * var_k2 - 0.25 * k0 * k0 - s_corr * s_corr,
    }


def bose_statistics(lambda_modulus: float, n: int) -> float:
    """Geometric number distribution (1-|lam|^2)|lam|^{2n} of the k=1/2
    displacement states."""
    if not (0.0 < lambda_modulus < 1.0):
        raise ValueError("need 0 < |lambda| < 1")
    x = lambda_modulus ** 2
    return (1.0 - x) * x ** n


def bose_mean(lambda_modulus: float) -> float:
    x = lambda_modulus ** 2
    return x / (1.0 - x)


def sg_sums(k: float, alpha_mod: float) -> dict:
    """The exponential-series sums h1 = <sqrt(N+2k)>, h2 and the
    combination h entering the quadrature second moments.

    Summed in log domain (the Poisson weights peak at n = |alpha|^2, and
    e^{-|alpha|^2} underflows long before the library's |alpha| range ends).
    """
    x = alpha_mod ** 2
    if x == 0.0:
        h1 = math.sqrt(2.0 * k)
        h2 = math.sqrt(2.0 * k * (2.0 * k + 1.0))
    else:
        n_max = int(x + 14.0 * math.sqrt(x + 1.0) + 60.0)
        n = np.arange(n_max + 1, dtype=float)
        logw = -x + n * math.log(x) - gammaln(n + 1.0)
        peak = float(np.max(logw))
        w = np.exp(logw - peak)
        scale = math.exp(peak) if peak > -700 else 0.0
        if scale == 0.0:  # keep everything relative when the peak underflows
            scale, w = 1.0, np.exp(logw - peak) * math.exp(max(peak, -700))
        h1 = scale * float(np.sum(w * np.sqrt(2.0 * k + n)))
        h2 = scale * float(np.sum(w * np.sqrt((2.0 * k + n) * (2.0 * k + n + 1.0))))
    h = 0.5 * x * x - 0.5 * (h2 - 2.0 * k - 1.0) * x + 0.5 * k
    return {"h1": h1, "h2": h2, "h": h}


def sg_expectations(k: float, alpha) -> dict:
    """Moments of the composite-annihilation eigenstates: the K0 moments
    are oscillator-like while K1, K2 involve the series sums h1, h2."""
    alpha = complex(alpha)
    r = abs(alpha)
    beta = cmath.phase(alpha) if alpha != 0 else 0.0
    sums = sg_sums(k, r)
    h1, h2, h = sums["h1"], sums["h2"], sums["h"]
    c, s = math.cos(beta), math.sin(beta)
    diff = h2 - h1 * h1
    return {
        "K1": r * c * h1,
        "K2": -r * s * h1,
        "K0": r * r + k,
        "var_K0": r * r,
        "K1_sq": r * r * c * c * h2 + h,
        "K2_sq": r * r * s * s * h2 + h,
        "var_K1": r * r * c * c * diff + h,
        "var_K2": r * r * s * s * diff + h,
        "S_corr": -0.5 * r * r * math.sin(2.0 * beta) * diff,
        "h1": h1,
        "h2": h2,
        "h": h,
        "Nbar": r * r,
    }


def sg_asymptotics(k: float, alpha_modulus: float, order: int = 2) -> dict:
    """Large-|alpha| expansions of h1, h1^2, h2, h2 - h1^2 and h."""
    if alpha_modulus < 5.0:
        raise ValueError("asymptotic branch needs |alpha| >= 5")
    if order > 2:
        raise ValueError("expansions implemented to order 2")
    x = alpha_modulus
    ix2 = x ** -2.0
    c14 = -0.5 * k * k - 3.0 * k / 8.0 + 7.0 / 128.0
    h1 = x * (1.0 + (k - 0.125) * ix2 + (c14 * ix2 * ix2 if order >= 2 else 0.0))
    h1_sq = x * x * (1.0 + (2.0 * k - 0.25) * ix2
                     - ((k - 0.125) * ix2 * ix2 if order >= 2 else 0.0))
    h2 = x * x * (1.0 + (2.0 * k + 0.5) * ix2
                  - (0.125 * ix2 * ix2 if order >= 2 else 0.0))
    diff = 0.75 + ((k - 0.25) * ix2 if order >= 1 else 0.0)
    h = 0.25 * x * x * (1.0 + ((2.0 * k + 0.25) * ix2 if order >= 1 else 0.0))
    return {"h1": h1, "h1_sq": h1_sq, "h2": h2, "diff": diff, "h": h,
            "c1_minus4": c14}


def cross_kernel_C(k: float, u) -> complex:
    """C_k(u) = sum_n u^n / (sqrt((2k)_n) n!), the line between the
    composite-oscillator and lowering-eigenstate families."""
    u = complex(u)
    acc = 0.0 + 0.0j
    t = 1.0 + 0.0j
    n = 0
    while True:
        acc += t
        t *= u / ((n + 1.0) * math.sqrt(2.0 * k + n))
        n += 1
        if n > 4 and abs(t) < 1e-17 * max(abs(acc), 1e-300):
            break
        if n > sf.SERIES_MAX_TERMS:
            break
    return acc


def cross_kernel_D(k: float, u) -> complex:
    """D_k(u) = sum_n sqrt((2k)_n) u^n / n!."""
    u = complex(u)
    acc = 0.0 + 0.0j
    t = 1.0 + 0.0j
    n = 0
    while True:
        acc += t
        t *= u * math.sqrt(2.0 * k + n) / (n + 1.0)
        n += 1
        if n > 4 and abs(t) < 1e-17 * max(abs(acc), 1e-300):
            break
        if n > sf.SERIES_MAX_TERMS:
            break
    return acc


def cross_overlaps(k: float, alpha, z, lam) -> dict:
    """All pairwise scalar products between the three families."""
    alpha, z, lam = complex(alpha), complex(z), complex(lam)
    if abs(lam) >= 1.0:
        raise ValueError("|lambda| must be < 1")
    c_k = cross_kernel_C(k, np.conj(alpha) * z)
    d_k = cross_kernel_D(k, np.conj(alpha) * lam)
    overlap_az = (math.exp(-0.5 * abs(alpha) ** 2)
                  * c_k * math.exp(-0.5 * sf.log_g_k(k, abs(z) ** 2)))
    overlap_al = (math.exp(-0.5 * abs(alpha) ** 2)
                  * (1.0 - abs(lam) ** 2) ** k * d_k)
    overlap_lz = ((1.0 - abs(lam) ** 2) ** k
                  * cmath.exp(np.conj(lam) * z)
                  * math.exp(-0.5 * sf.log_g_k(k, abs(z) ** 2)))
    return {"C_k": c_k, "D_k": d_k, "overlap_az": overlap_az,
            "overlap_al": overlap_al, "overlap_lz": overlap_lz}


def time_evolve(state, t: float):
    """Free evolution by K0: the family is preserved, the parameter turns
    by e^{-it}, and a global phase e^{-ikt} multiplies the state."""
    phase = cmath.exp(-1j * state.k * t)
    rot = cmath.exp(-1j * t)
    if isinstance(state, BGState):
        return BGState(state.k, state.z * rot), phase
    if isinstance(state, PerelomovState):
        return PerelomovState(state.k, state.lam * rot), phase
    if isinstance(state, SGState):
        return SGState(state.k, state.alpha * rot), phase
    raise TypeError(f"not a coherent state: {state!r}")


def serialize_state(state, vec: StateVector) -> dict:
    """JSON-ready payload for the file exports."""
    family = {BGState: "bg", PerelomovState: "perelomov", SGState: "sg"}[type(state)]
    par = {"bg": lambda s: s.z, "perelomov": lambda s: s.lam,
           "sg": lambda s: s.alpha}[family](state)
    return {
        "family": family,
        "k": state.k,
        "parameter": [par.real, par.imag],
        "cutoff": vec.cutoff,
        "tail_norm": vec.tail_norm,
        "coeffs": [[c.real, c.imag] for c in vec.coeffs],
    }
