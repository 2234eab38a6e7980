"""Bell functionals over outcome probabilities, Bell operators, LHV bounds.

A functional is stored as full coefficient tensors over (outcome, setting)
indices, all 0-based. Outcome index 0 is the party's "+" outcome; for the
CH functional Bob's designated "-" outcome therefore sits at index 1.
"""

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .linalg import kron
from .states import BipartiteDensity, SizeGuardError

LHV_ENUM_GUARD = 1_000_000


@dataclass(frozen=True)
class BinaryMeasurement:
    """Two-outcome POVM {M, 1-M}; only the "+" element is stored."""

    plus: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.plus, dtype=complex)
        object.__setattr__(self, "plus", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("POVM element must be square")
        if np.linalg.norm(m - m.conj().T) > 1e-10 * max(1.0, np.linalg.norm(m)):
            raise ValueError("POVM element must be Hermitian")
        w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        if w[0] < -1e-10 or w[-1] > 1 + 1e-10:
            raise ValueError("POVM element must satisfy 0 <= M <= 1")

    @property
    def dim(self):
        return self.plus.shape[0]

    @property
    def minus(self):
        return np.eye(self.dim) - self.plus

    def element(self, outcome):
        return self.plus if outcome == 0 else self.minus


@dataclass(frozen=True)
class BellFunctional:
    name: str
    sA: int
    sB: int
    oA: int
    oB: int
    joint: np.ndarray   # (oA, oB, sA, sB)
    margA: np.ndarray   # (oA, sA)
    margB: np.ndarray   # (oB, sB)
    lhv_bound: float

    def __post_init__(self):
        for arr, shape in ((self.joint, (self.oA, self.oB, self.sA, self.sB)),
                           (self.margA, (self.oA, self.sA)),
                           (self.margB, (self.oB, self.sB))):
            a = np.asarray(arr, dtype=float)
            if a.shape != shape:
                raise ValueError(f"coefficient tensor shape {a.shape} != {shape}")
            if not np.all(np.isfinite(a)):
                raise ValueError("coefficients must be finite")
        object.__setattr__(self, "joint", np.asarray(self.joint, dtype=float))
        object.__setattr__(self, "margA", np.asarray(self.margA, dtype=float))
        object.__setattr__(self, "margB", np.asarray(self.margB, dtype=float))


def _make(name, sA, sB, joint, margA, margB):
    f = BellFunctional(name, sA, sB, 2, 2, joint, margA, margB, lhv_bound=np.nan)
    bound = lhv_bound_bruteforce(f)
    return BellFunctional(name, sA, sB, 2, 2, joint, margA, margB, lhv_bound=bound)


def ch() -> BellFunctional:
    """Clauser-Horne functional; LHV bound 0."""
    joint = np.zeros((2, 2, 2, 2))
    joint[0, 1, 0, 0] = joint[0, 1, 0, 1] = joint[0, 1, 1, 0] = 1.0
    joint[0, 1, 1, 1] = -1.0
    margA = np.zeros((2, 2))
    margA[0, 0] = -1.0   # -p_A^+(1)
    margB = np.zeros((2, 2))
    margB[1, 0] = -1.0   # -p_B^-(1)
    f = _make("CH", 2, 2, joint, margA, margB)
    assert f.lhv_bound == 0.0
    return f


def chsh_prob() -> BellFunctional:
    """CHSH in probability form, signed so that CH = CHSH/4 - 1/2; bound 2."""
    joint = np.zeros((2, 2, 2, 2))
    sign = np.array([[1.0, 1.0], [1.0, -1.0]])
    for a, b in itertools.product(range(2), range(2)):
        joint[a, b] = sign * (1.0 if a != b else -1.0)
    f = _make("CHSH", 2, 2, joint, np.zeros((2, 2)), np.zeros((2, 2)))
    assert f.lhv_bound == 2.0
    return f


def i3322() -> BellFunctional:
    """Three-setting two-outcome functional in Collins-Gisin form; bound 0."""
    joint = np.zeros((2, 2, 3, 3))
    for k, l in [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]:
        joint[0, 0, k, l] = 1.0
    joint[0, 0, 1, 2] = joint[0, 0, 2, 1] = -1.0
    margA = np.zeros((2, 3))
    margA[0, 0] = -1.0
    margB = np.zeros((2, 3))
    margB[0, 0] = -2.0
    margB[0, 1] = -1.0
    f = _make("I3322", 3, 3, joint, margA, margB)
    if f.lhv_bound != 0.0:
        raise RuntimeError("I3322 coefficient transcription error: LHV bound != 0")
    return f


def _check_measurements(f, aMeas, bMeas):
    if len(aMeas) != f.sA or len(bMeas) != f.sB:
        raise ValueError("measurement count does not match setting count")
    dA = aMeas[0].dim
    dB = bMeas[0].dim
    if any(m.dim != dA for m in aMeas) or any(m.dim != dB for m in bMeas):
        raise ValueError("measurement dimensions are not uniform")
    return dA, dB


def bell_operator(f: BellFunctional, aMeas, bMeas):
    """Hermitian operator with tr(rho . op) = evaluate(f, rho, aMeas, bMeas)."""
    if f.oA != 2 or f.oB != 2:
        raise ValueError("only two-outcome functionals are supported")
    dA, dB = _check_measurements(f, aMeas, bMeas)
    op = np.zeros((dA * dB, dA * dB), dtype=complex)
    eyeA, eyeB = np.eye(dA), np.eye(dB)
    for a, b, k, l in itertools.product(range(2), range(2), range(f.sA), range(f.sB)):
        c = f.joint[a, b, k, l]
        if c != 0.0:
            op += c * kron(aMeas[k].element(a), bMeas[l].element(b))
    for a, k in itertools.product(range(2), range(f.sA)):
        if f.margA[a, k] != 0.0:
            op += f.margA[a, k] * kron(aMeas[k].element(a), eyeB)
    for b, l in itertools.product(range(2), range(f.sB)):
        if f.margB[b, l] != 0.0:
            op += f.margB[b, l] * kron(eyeA, bMeas[l].element(b))
    return op


def evaluate(f: BellFunctional, rho: BipartiteDensity, aMeas, bMeas) -> float:
    """Functional value from outcome probabilities tr(rho A^a (x) B^b)."""
    if f.oA != 2 or f.oB != 2:
        raise ValueError("only two-outcome functionals are supported")
    dA, dB = _check_measurements(f, aMeas, bMeas)
    if (dA, dB) != (rho.dA, rho.dB):
        raise ValueError("measurement dimensions do not match the state")
    rho4 = rho.rho.reshape(dA, dB, dA, dB)
    trB = np.einsum("abcb->ac", rho4)
    trA = np.einsum("abad->bd", rho4)
    val = 0.0
    for a, b, k, l in itertools.product(range(2), range(2), range(f.sA), range(f.sB)):
        c = f.joint[a, b, k, l]
        if c != 0.0:
            p = np.einsum("abcd,ca,db->", rho4,
                          aMeas[k].element(a), bMeas[l].element(b)).real
            val += c * p
    for a, k in itertools.product(range(2), range(f.sA)):
        if f.margA[a, k] != 0.0:
            val += f.margA[a, k] * np.einsum("ac,ca->", trB, aMeas[k].element(a)).real
    for b, l in itertools.product(range(2), range(f.sB)):
        if f.margB[b, l] != 0.0:
            val += f.margB[b, l] * np.einsum("bd,db->", trA, bMeas[l].element(b)).real
    return float(val)


def lhv_bound_bruteforce(f: BellFunctional) -> float:
    """Maximum over all deterministic local strategies.

    For a fixed Alice assignment the Bob optimum decouples per setting, so
    the cost is oA^sA * sB * oB rather than oA^sA * oB^sB.
    """
    if f.oA ** f.sA * f.oB ** f.sB > LHV_ENUM_GUARD:
        raise SizeGuardError("deterministic strategy enumeration exceeds the guard")
    best = -np.inf
    for alice in itertools.product(range(f.oA), repeat=f.sA):
        # bobscore[b, l] = sum_k joint[alice[k], b, k, l] + margB[b, l]
        bobscore = f.joint[list(alice), :, range(f.sA), :].sum(axis=0) + f.margB
        val = f.margA[list(alice), range(f.sA)].sum() + bobscore.max(axis=0).sum()
        best = max(best, float(val))
    return best


# --- inequality JSON format ---------------------------------------------------

def functional_to_json(f: BellFunctional) -> dict:
    return {
        "name": f.name, "sA": f.sA, "sB": f.sB, "oA": f.oA, "oB": f.oB,
        "joint": [{"a": a, "b": b, "k": k, "l": l, "c": f.joint[a, b, k, l]}
                  for a, b, k, l in zip(*np.nonzero(f.joint))],
        "margA": [{"a": a, "k": k, "c": f.margA[a, k]}
                  for a, k in zip(*np.nonzero(f.margA))],
        "margB": [{"b": b, "l": l, "c": f.margB[b, l]}
                  for b, l in zip(*np.nonzero(f.margB))],
    }


def load_functional(spec) -> BellFunctional:
    """Build a functional from its JSON description (0-based indices).

    The LHV bound is recomputed by brute force, never trusted from input.
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    sA, sB = int(spec["sA"]), int(spec["sB"])
    oA, oB = int(spec.get("oA", 2)), int(spec.get("oB", 2))
    joint = np.zeros((oA, oB, sA, sB))
    for t in spec.get("joint", []):
        joint[t["a"], t["b"], t["k"], t["l"]] = float(t["c"])
    margA = np.zeros((oA, sA))
    for t in spec.get("margA", []):
        margA[t["a"], t["k"]] = float(t["c"])
    margB = np.zeros((oB, sB))
    for t in spec.get("margB", []):
        margB[t["b"], t["l"]] = float(t["c"])
    f = BellFunctional(str(spec.get("name", "custom")), sA, sB, oA, oB,
                       joint, margA, margB, lhv_bound=np.nan)
    bound = lhv_bound_bruteforce(f)
    return BellFunctional(f.name, sA, sB, oA, oB, joint, margA, margB, lhv_bound=bound)
