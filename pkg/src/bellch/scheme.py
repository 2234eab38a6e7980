"""Analytic pairing-measurement scheme and closed-form Bell-CH values.

Alice's two settings split her space into qubit blocks (pairing the basis
vectors with the two largest Schmidt coefficients first) and measure
sigma_z / sigma_x in each block; Bob's optimal response is computed
explicitly from positive-part projectors of steered operators.
"""

from math import comb, cos, sin, sqrt, tan

import numpy as np

from .bell import BellFunctional, BinaryMeasurement
from .linalg import positive_part_projector
from .states import BipartiteDensity, SchmidtState, tensor_power_schmidt

_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
_SX = np.array([[0.0, 1.0], [1.0, 0.0]])


def _block_sum(d, pauli):
    m = np.zeros((d, d))
    for i in range(d // 2):
        m[2 * i:2 * i + 2, 2 * i:2 * i + 2] = pauli
    if d % 2:
        m[d - 1, d - 1] = 1.0
    return m


def alice_scheme(d: int):
    """Alice's two pairing measurements: (1 +/- Z)/2 and (1 +/- X)/2."""
    if d < 2:
        raise ValueError("d must be >= 2")
    eye = np.eye(d)
    a1 = 0.5 * (eye + _block_sum(d, _SZ))
    a2 = 0.5 * (eye + _block_sum(d, _SX))
    return BinaryMeasurement(a1), BinaryMeasurement(a2)


def steered_operators(rho: BipartiteDensity, aMeas, f: BellFunctional):
    """Bob-side operators F_l with value = const + sum_l tr(F_l B_l^+).

    Substituting B^- = 1 - B^+ folds every Bob-dependent coefficient into
    an effective weight (c_+ - c_-) on the designated element.
    """
    if f.oA != 2 or f.oB != 2:
        raise ValueError("only two-outcome functionals are supported")
    if len(aMeas) != f.sA:
        raise ValueError("measurement count does not match setting count")
    dA, dB = rho.dA, rho.dB
    rho4 = rho.rho.reshape(dA, dB, dA, dB)
    ops = []
    for l in range(f.sB):
        c = np.zeros((dA, dA), dtype=complex)
        for k in range(f.sA):
            for a in range(2):
                w = f.joint[a, 0, k, l] - f.joint[a, 1, k, l]
                if w != 0.0:
                    c += w * aMeas[k].element(a)
        c += (f.margB[0, l] - f.margB[1, l]) * np.eye(dA)
        fl = np.einsum("abcd,ca->bd", rho4, c)
        ops.append(0.5 * (fl + fl.conj().T))
    return ops


def bob_best_response(rho: BipartiteDensity, aMeas, f: BellFunctional):
    """Bob's exactly optimal two-outcome POVMs for fixed Alice measurements."""
    return [BinaryMeasurement(positive_part_projector(fl))
            for fl in steered_operators(rho, aMeas, f)]


def analytic_ch_value(s: SchmidtState) -> float:
    """Closed-form Bell-CH value of the pairing scheme on a pure state."""
    c2 = s.coeffs ** 2
    d = s.dim
    val = 0.0
    for n in range(d // 2):
        x, y = c2[2 * n], c2[2 * n + 1]
        val += 0.5 * sqrt((x + y) ** 2 + 4 * x * y)
    if d % 2:
        val += 0.5 * c2[d - 1]
    return val - 0.5


def me_value(d: int) -> float:
    """Scheme value for the d-dimensional maximally entangled state."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if d % 2 == 0:
        return 1 / sqrt(2) - 0.5
    return (sqrt(2) * (d - 1) + 1) / (2 * d) - 0.5


def _binom_odd(n, m):
    # Kummer/Lucas: C(n, m) is odd iff the binary digits of m are a subset of n's.
    return (m & (n - m)) == 0


def correlated_subspace_probability(phi: float, n: int) -> float:
    """Total weight of the perfectly correlated 2-dim subspaces of |Psi_2>^(x)n."""
    # 1 - sum over m with C(n-1, m) odd of cos^(2(n-1-m)) sin^(2m)
    miss = 0.0
    for m in range(n):
        if _binom_odd(n - 1, m):
            miss += cos(phi) ** (2 * (n - 1 - m)) * sin(phi) ** (2 * m)
    return 1.0 - miss


def two_qubit_ncopy_value(phi: float, n: int) -> float:
    """Scheme value for n copies of cos(phi)|00> + sin(phi)|11>."""
    if not 0.0 < phi <= np.pi / 4 + 1e-15:
        raise ValueError("phi must lie in (0, pi/4]")
    if n < 1:
        raise ValueError("n must be >= 1")
    p = correlated_subspace_probability(phi, n)
    return p / sqrt(2) + (1 - p) / 2 * sqrt(1 + sin(2 * phi) ** 2) - 0.5


def concentration_value(phi: float, n: int) -> float:
    """Value of the concentration-style protocol: project Alice's space onto
    an equal-coefficient subspace, then measure maximally entangled blocks."""
    if not 0.0 < phi <= np.pi / 4 + 1e-15:
        raise ValueError("phi must lie in (0, pi/4]")
    if n < 1:
        raise ValueError("n must be >= 1")
    val = 0.0
    for m in range(n + 1):
        dim = comb(n, m)
        q = dim * cos(phi) ** (2 * (n - m)) * sin(phi) ** (2 * m)
        val += q * me_value(dim)
    return val


def scheme_pipeline_value(s: SchmidtState, f: BellFunctional) -> float:
    """Measurement-pipeline value: alice_scheme + bob_best_response, evaluated
    by probability summation. Independent of the closed form above."""
    from .bell import evaluate
    from .states import to_density
    rho = to_density(s)
    aM = alice_scheme(s.dim)
    bM = bob_best_response(rho, aM, f)
    return evaluate(f, rho, aM, bM)
