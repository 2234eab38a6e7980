"""State constructors and entanglement measures.

Pure states are carried around as sorted Schmidt-coefficient vectors;
mixed states as density matrices with explicit local dimensions.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .linalg import kron, partial_trace

SCHMIDT_COEFF_GUARD = 20_000_000   # max number of Schmidt coefficients
DENSITY_DIM_GUARD = 4096           # max total Hilbert-space dimension
_SPECTRUM_CHECK_DIM = 1024         # above this, skip the O(D^3) positivity check


class SizeGuardError(RuntimeError):
    """A construction would exceed the configured memory/dimension budget."""


@dataclass(frozen=True)
class SchmidtState:
    """Pure bipartite state |Psi> = sum_i c_i |ii>, c sorted descending."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        object.__setattr__(self, "coeffs", c)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("Schmidt coefficients must be a nonempty vector")
        if np.any(c < 0) or np.any(np.diff(c) > 0):
            raise ValueError("Schmidt coefficients must be sorted descending and >= 0")
        if abs(np.sum(c * c) - 1.0) > 1e-12:
            raise ValueError("Schmidt coefficients must be normalized")

    @property
    def dim(self):
        return self.coeffs.size


@dataclass(frozen=True)
class BipartiteDensity:
    """Density matrix on C^dA (x) C^dB, basis index a*dB + b."""

    dA: int
    dB: int
    rho: np.ndarray = field(repr=False)

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        object.__setattr__(self, "rho", rho)
        d = self.dA * self.dB
        if self.dA < 1 or self.dB < 1 or rho.shape != (d, d):
            raise ValueError(f"density shape {rho.shape} does not match dims ({self.dA},{self.dB})")
        if np.linalg.norm(rho - rho.conj().T) > 1e-12 * max(1.0, np.linalg.norm(rho)):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-12:
            raise ValueError("density matrix trace differs from 1")
        # Large tensor powers of valid states stay positive by construction;
        # the spectral check is only affordable for moderate dimensions.
        if d <= _SPECTRUM_CHECK_DIM:
            if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] < -1e-10:
                raise ValueError("density matrix has a negative eigenvalue")

    @property
    def dim(self):
        return self.dA * self.dB

    def purity(self):
        return float(np.trace(self.rho @ self.rho).real)


def schmidt_state(raw) -> SchmidtState:
    """Normalize and sort a raw nonnegative coefficient vector."""
    c = np.asarray(raw, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("need a nonempty coefficient vector")
    if np.any(c < 0):
        raise ValueError("Schmidt coefficients must be nonnegative")
    norm = np.linalg.norm(c)
    if norm == 0:
        raise ValueError("all-zero coefficient vector")
    return SchmidtState(np.sort(c / norm)[::-1])


def to_density(s: SchmidtState) -> BipartiteDensity:
    """Rank-1 density of |Psi> = sum_i c_i |ii> in the Schmidt basis."""
    d = s.dim
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * d + np.arange(d)] = s.coeffs
    return BipartiteDensity(d, d, np.outer(psi, psi.conj()))


def tensor_power_schmidt(s: SchmidtState, n: int) -> SchmidtState:
    """Schmidt coefficients of |Psi>^(x)n: all n-fold products, re-sorted."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if s.dim ** n > SCHMIDT_COEFF_GUARD:
        raise SizeGuardError(f"{s.dim}^{n} Schmidt coefficients exceed the guard")
    out = s.coeffs
    for _ in range(n - 1):
        out = np.multiply.outer(out, s.coeffs).ravel()
    out = np.sort(out)[::-1]
    # Same reduction as the normalization invariant, so they cannot disagree
    # at machine precision for ~1e7 coefficients.
    out = out / np.sqrt(np.sum(out * out))
    return SchmidtState(out)


def tensor_power_density(rho: BipartiteDensity, n: int) -> BipartiteDensity:
    """rho^(x)n with parties regrouped as (A1..An) (x) (B1..Bn)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if rho.dim ** n > DENSITY_DIM_GUARD:
        raise SizeGuardError(f"total dimension {rho.dim}^{n} exceeds the guard")
    if n == 1:
        return rho
    dA, dB = rho.dA, rho.dB
    full = rho.rho
    for _ in range(n - 1):
        full = kron(full, rho.rho)
    # Map the natural copy ordering (a1 b1 ... an bn) to (a1..an b1..bn).
    dim = rho.dim ** n
    coords = np.unravel_index(np.arange(dim), (dA,) * n + (dB,) * n)
    interleaved = []
    for i in range(n):
        interleaved += [coords[i], coords[n + i]]
    perm = np.ravel_multi_index(interleaved, (dA, dB) * n)
    full = full[np.ix_(perm, perm)]
    return BipartiteDensity(dA ** n, dB ** n, full)


_SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def werner(p: float) -> BipartiteDensity:
    """Two-qubit Werner state with singlet fidelity p, 1/4 <= p <= 1."""
    if not (0.25 - 1e-12 <= p <= 1 + 1e-12):
        raise ValueError("werner states require 1/4 <= p <= 1")
    rho = ((1 - p) / 3) * np.eye(4, dtype=complex) \
        + ((4 * p - 1) / 3) * np.outer(_SINGLET, _SINGLET.conj())
    return BipartiteDensity(2, 2, rho)


def isotropic(d: int, p: float) -> BipartiteDensity:
    """d-dimensional isotropic state: p |ME><ME| + (1-p) 1/d^2."""
    lo = -1.0 / (d * d - 1)
    if not (lo - 1e-12 <= p <= 1 + 1e-12):
        raise ValueError(f"isotropic states require {lo} <= p <= 1")
    me = to_density(schmidt_state(np.ones(d))).rho
    rho = p * me + (1 - p) * np.eye(d * d, dtype=complex) / (d * d)
    return BipartiteDensity(d, d, rho)


def random_two_qubit(rng: np.random.Generator) -> BipartiteDensity:
    """Hilbert-Schmidt-random two-qubit density matrix (4x4 Ginibre)."""
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return BipartiteDensity(2, 2, rho)


def random_pure_qudit(d: int, rng: np.random.Generator) -> SchmidtState:
    """Pure two-qudit state with raw Schmidt coefficients uniform on (0,1)."""
    if d < 2:
        raise ValueError("d must be >= 2")
    raw = rng.uniform(0.0, 1.0, size=d)
    while np.any(raw == 0.0):  # open interval
        raw = rng.uniform(0.0, 1.0, size=d)
    return schmidt_state(raw)


_SY_SY = None


def _syy():
    global _SY_SY
    if _SY_SY is None:
        sy = np.array([[0, -1j], [1j, 0]])
        _SY_SY = np.kron(sy, sy)
    return _SY_SY


def concurrence(rho: BipartiteDensity) -> float:
    """Wootters concurrence of a two-qubit state."""
    if (rho.dA, rho.dB) != (2, 2):
        raise ValueError("concurrence is defined here for 2x2 systems only")
    r = rho.rho
    m = r @ _syy() @ r.conj() @ _syy()
    lam = np.sqrt(np.clip(np.linalg.eigvals(m).real, 0.0, None))
    lam = np.sort(lam)[::-1]
    return float(np.clip(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0))


def linear_entropy(rho: BipartiteDensity) -> float:
    """Normalized linear entropy (4/3)(1 - tr rho^2) of a two-qubit state."""
    if (rho.dA, rho.dB) != (2, 2):
        raise ValueError("linear_entropy is defined here for 2x2 systems only")
    return float(np.clip(4.0 / 3.0 * (1.0 - rho.purity()), 0.0, 1.0))


# --- state description format -------------------------------------------------

def read_density_file(path) -> BipartiteDensity:
    """Plain-text density matrix: header "dA dB", then rows of "re im" pairs."""
    with open(path) as f:
        header = f.readline().split()
        if len(header) != 2:
            raise ValueError("density file header must be 'dA dB'")
        dA, dB = int(header[0]), int(header[1])
        data = np.loadtxt(f, ndmin=2)
    d = dA * dB
    if data.shape != (d, 2 * d):
        raise ValueError(f"expected {d} rows of {d} 're im' pairs, got {data.shape}")
    rho = data[:, 0::2] + 1j * data[:, 1::2]
    return BipartiteDensity(dA, dB, rho)


def write_density_file(path, rho: BipartiteDensity):
    d = rho.dim
    flat = np.empty((d, 2 * d))
    flat[:, 0::2] = rho.rho.real
    flat[:, 1::2] = rho.rho.imag
    with open(path, "w") as f:
        f.write(f"{rho.dA} {rho.dB}\n")
        np.savetxt(f, flat, fmt="%.17g")


def load_state(spec) -> BipartiteDensity:
    """Build a state from a JSON description (dict or JSON string).

    kinds: {"kind":"schmidt","coeffs":[...]}, {"kind":"werner","p":...},
    {"kind":"isotropic","d":...,"p":...}, {"kind":"densityfile","path":...}
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    kind = spec.get("kind")
    if kind == "schmidt":
        return to_density(schmidt_state(spec["coeffs"]))
    if kind == "werner":
        return werner(float(spec["p"]))
    if kind == "isotropic":
        return isotropic(int(spec["d"]), float(spec["p"]))
    if kind == "densityfile":
        return read_density_file(spec["path"])
    raise ValueError(f"unknown state kind: {kind!r}")
