"""Alternating best-response maximization of two-outcome Bell functionals.

Each inner step is an eigenproblem: with one party fixed, the other party's
optimal POVM elements are positive-part projectors of steered operators.
All restarts run as stacked arrays (batched matmul/eigh); restarts that have
converged are dropped from the working set so stragglers don't tax the rest.
"""

from dataclasses import dataclass, field

import numpy as np

from . import bell
from .bell import BellFunctional, BinaryMeasurement
from .linalg import DEFAULT_TAU_REL, eig_hermitian
from .scheme import alice_scheme
from .states import BipartiteDensity, DENSITY_DIM_GUARD, SizeGuardError


@dataclass(frozen=True)
class SeesawConfig:
    restarts: int = 100
    max_iters: int = 500
    tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class SeesawResult:
    value: float
    a_meas: list
    b_meas: list
    iterations: int
    restart_index: int
    converged: bool
    history: np.ndarray | None = field(default=None, repr=False)


def haar_unitary(d: int, rng: np.random.Generator):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def _random_projector(d, rng):
    r = int(rng.integers(1, d))
    u = haar_unitary(d, rng)[:, :r]
    return u @ u.conj().T


def random_binary_povm(d: int, rng: np.random.Generator) -> BinaryMeasurement:
    """Haar-rotated projector of rank uniform in {1, .., d-1}."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return BinaryMeasurement(_random_projector(d, rng))


class _StepData:
    """Precomputed data for one party's best-response step.

    X is the party whose measurements are fixed, Y the responding one.
    Folding Y^- = 1 - Y^+ leaves
        value = offset + coef_px . p_x + sum_l tr(F_l Y_l^+),
    with F_l a steered operator depending linearly on X's elements; the
    linear map rho4 -> F is flattened into one (dY^2, dX^2) matrix.
    """

    def __init__(self, joint, margX, margY, rho4xy):
        dX, dY = rho4xy.shape[0], rho4xy.shape[1]
        self.dX, self.dY = dX, dY
        self.sX, self.sY = joint.shape[2], joint.shape[3]
        w0 = joint[0, 0] - joint[0, 1]               # (sX, sY)
        w1 = joint[1, 0] - joint[1, 1]
        self.wdiff = w0 - w1
        # constant (identity) part of the steered-operator weight, per l
        self.wconst = w1.sum(axis=0) + margY[0] - margY[1]
        self.coef_px = (joint[0, 1] - joint[1, 1]).sum(axis=1) + margX[0] - margX[1]
        self.offset = joint[1, 1].sum() + margX[1].sum() + margY[1].sum()
        trX = np.einsum("xyzy->xz", rho4xy)          # reduced state on X
        self.trx_vec = trX.T.ravel()
        # F[b,d] = sum_{a,c} rho4[a,b,c,d] C[c,a]  ->  M[(b,d),(c,a)]
        self.fmap_t = np.ascontiguousarray(
            rho4xy.transpose(1, 3, 2, 0).reshape(dY * dY, dX * dX).T)
        self.eye_flat = np.eye(dX).ravel()


def _respond(xplus, sd, tau_rel=DEFAULT_TAU_REL):
    """Optimal responding-party stack and the resulting functional values.

    xplus: (R, sX, dX, dX) designated elements of the fixed party.
    Returns (yplus (R, sY, dY, dY), values (R,)).
    """
    n_r = xplus.shape[0]
    dX, dY, sY = sd.dX, sd.dY, sd.sY
    x2 = xplus.reshape(n_r, sd.sX, dX * dX)
    c2 = np.swapaxes(x2.swapaxes(1, 2) @ sd.wdiff, 1, 2)       # (R, sY, dX^2)
    c2 = c2 + sd.wconst[None, :, None] * sd.eye_flat
    f = (c2.reshape(n_r * sY, dX * dX) @ sd.fmap_t).reshape(n_r, sY, dY, dY)
    f = 0.5 * (f + f.conj().swapaxes(-1, -2))
    evals, vecs = np.linalg.eigh(f)
    tau = tau_rel * np.max(np.abs(evals), axis=-1, keepdims=True)
    mask = evals > tau
    yplus = (vecs * mask[..., None, :]) @ vecs.conj().swapaxes(-1, -2)
    # tr(F_l Y_l^+) is just the sum of the retained eigenvalues
    trfp = np.where(mask, evals, 0.0).sum(axis=(1, 2))
    px = (x2 @ sd.trx_vec).real                                 # (R, sX)
    return yplus, sd.offset + px @ sd.coef_px + trfp


def _step_pair(rho: BipartiteDensity, f: BellFunctional):
    dA, dB = rho.dA, rho.dB
    rho4 = rho.rho.reshape(dA, dB, dA, dB)
    sd_bob = _StepData(f.joint, f.margA, f.margB, rho4)
    sd_alice = _StepData(f.joint.transpose(1, 0, 3, 2), f.margB, f.margA,
                         rho4.transpose(1, 0, 3, 2))
    return sd_bob, sd_alice


def _scheme_start(rho: BipartiteDensity):
    """Alice scheme conjugated into the sorted eigenbasis of the reduced state."""
    red = np.einsum("abcb->ac", rho.rho.reshape(rho.dA, rho.dB, rho.dA, rho.dB))
    _, v = eig_hermitian(red)
    return [v @ m.plus @ v.conj().T for m in alice_scheme(rho.dA)]


def alice_best_response(rho: BipartiteDensity, bMeas, f: BellFunctional):
    """Alice's exactly optimal POVMs for fixed Bob measurements."""
    if f.oA != 2 or f.oB != 2:
        raise ValueError("only two-outcome functionals are supported")
    _, sd_alice = _step_pair(rho, f)
    stack = np.stack([m.plus for m in bMeas])[None]
    proj, _ = _respond(stack, sd_alice)
    return [BinaryMeasurement(proj[0, k]) for k in range(f.sA)]


def seesaw_maximize(rho: BipartiteDensity, f: BellFunctional,
                    cfg: SeesawConfig = SeesawConfig(),
                    record_history: bool = False) -> SeesawResult:
    """Best value over random restarts of alternating best responses.

    Restart 0 is seeded with the analytic pairing scheme whenever the state
    is pure and the functional has two Alice settings; all other restarts
    draw random projective measurements from a per-restart RNG stream.
    A restart stops once its value changes by less than cfg.tol.
    """
    if f.oA != 2 or f.oB != 2:
        raise ValueError("only two-outcome functionals are supported")
    if rho.dim > DENSITY_DIM_GUARD:
        raise SizeGuardError(f"total dimension {rho.dim} exceeds the guard")
    dA = rho.dA
    sd_bob, sd_alice = _step_pair(rho, f)

    n_r = cfg.restarts
    a_plus = np.empty((n_r, f.sA, dA, dA), dtype=complex)
    for r in range(n_r):
        rng = np.random.default_rng([cfg.seed, r])
        if r == 0 and f.sA == 2 and rho.purity() > 1 - 1e-10 and dA >= 2:
            a_plus[0] = np.stack(_scheme_start(rho))
        else:
            a_plus[r] = np.stack([_random_projector(dA, rng)
                                  for _ in range(f.sA)])

    b_plus, vals = _respond(a_plus, sd_bob)
    active = np.arange(n_r)
    final_vals = vals.copy()
    prev = vals
    iter_count = np.full(n_r, cfg.max_iters)
    converged = np.zeros(n_r, dtype=bool)
    final_meas = {}
    history = [final_vals.copy()] if record_history else None

    it = 1
    while active.size and it < cfg.max_iters:
        a_plus, _ = _respond(b_plus, sd_alice)
        b_plus, vals = _respond(a_plus, sd_bob)
        it += 1
        final_vals[active] = vals
        if record_history:
            history.append(final_vals.copy())
        done = np.abs(vals - prev) < cfg.tol
        if done.any():
            for i in np.nonzero(done)[0]:
                r = int(active[i])
                final_meas[r] = (a_plus[i].copy(), b_plus[i].copy())
                iter_count[r] = it
                converged[r] = True
            keep = ~done
            active, a_plus, b_plus = active[keep], a_plus[keep], b_plus[keep]
            vals = vals[keep]
        prev = vals
    for i, r in enumerate(active):
        final_meas[int(r)] = (a_plus[i], b_plus[i])

    best = int(np.argmax(final_vals))
    best_a, best_b = final_meas[best]
    a_meas = [BinaryMeasurement(best_a[k]) for k in range(f.sA)]
    b_meas = [BinaryMeasurement(best_b[l]) for l in range(f.sB)]
    # Anchor the reported value to the independent probability-summation path.
    value = bell.evaluate(f, rho, a_meas, b_meas)
    return SeesawResult(
        value=value,
        a_meas=a_meas,
        b_meas=b_meas,
        iterations=int(iter_count[best]) if converged[best] else int(cfg.max_iters),
        restart_index=best,
        converged=bool(converged[best]),
        history=np.array(history) if record_history else None,
    )
