"""Per-node ATC diffusion NLMS operations with adaptive combination weights.

One iteration of the adapt-then-combine round, from the point of view of a
single node k:

    e_k   = d_k - u_k' w_k
    psi_k = w_k + mu_k u_k e_k          (adapt; skipped when not sampled)
    sigma2_jk, c_jk updated              (inverse-variance weights; sampled only)
    w_k   = sum_j c_jk psi_j             (combine)

These scalar/vector forms are the reference semantics; the Monte Carlo
engine in :mod:`asdnlms.harness` vectorizes the same arithmetic across
nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

# Inverse-variance floor: only ever reached when a neighbor's intermediate
# estimate exactly equals the local combined estimate.
SIGMA2_FLOOR = 1e-12


@dataclass
class NodeEstimator:
    """Adaptive-filter state owned by one node."""

    w: np.ndarray
    psi: np.ndarray
    sigma2: dict[int, float]
    mu_tilde: float
    nu: float
    delta: float = 1e-5

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=float)
        self.psi = np.asarray(self.psi, dtype=float)
        if not 0 < self.mu_tilde < 2:
            raise ValueError("mu_tilde must lie in (0, 2)")
        if self.delta <= 0:
            raise ValueError("delta must be > 0")
        if not 0 < self.nu <= 1:
            raise ValueError("nu must lie in (0, 1]")


def compute_error(est: NodeEstimator, u: np.ndarray, d: float) -> float:
    """a-priori error e_k = d_k - u_k' w_k."""
    return float(d - u @ est.w)


def nlms_step(w: np.ndarray, u: np.ndarray, e: float, mu_tilde: float, delta: float) -> np.ndarray:
    """Normalized LMS update w + mu u e with mu = mu_tilde / (delta + ||u||^2)."""
    mu = mu_tilde / (delta + float(u @ u))
    return w + mu * e * u


def adapt(est: NodeEstimator, u: np.ndarray, e: float | None, sampled: int) -> np.ndarray:
    """Adapt step; when unsampled the intermediate estimate is a plain copy.

    ``e`` may be None when unsampled — no error or step-size arithmetic
    happens on that path.
    """
    if sampled:
        est.psi = nlms_step(est.w, u, float(e), est.mu_tilde, est.delta)
    else:
        est.psi = est.w.copy()
    return est.psi


def acw_update(
    est: NodeEstimator, neighbor_psis: Mapping[int, np.ndarray]
) -> dict[int, float]:
    """Inverse-variance combination weights for a sampled node.

    Updates sigma2_jk <- (1-nu) sigma2_jk + nu ||psi_j - w_k||^2 for every
    neighbor and renormalizes; greater weight goes to neighbors whose
    intermediate estimates stay close to the local combined one.
    """
    for j, psi_j in neighbor_psis.items():
        diff = psi_j - est.w
        val = (1.0 - est.nu) * est.sigma2[j] + est.nu * float(diff @ diff)
        est.sigma2[j] = max(val, SIGMA2_FLOOR)
    inv = {j: 1.0 / est.sigma2[j] for j in neighbor_psis}
    total = sum(inv.values())
    return {j: inv_j / total for j, inv_j in inv.items()}


def combine(neighbor_psis: Mapping[int, np.ndarray], weights: Mapping[int, float]) -> np.ndarray:
    """Combine step: convex combination of neighborhood intermediate estimates."""
    out = None
    for j, psi_j in neighbor_psis.items():
        term = weights[j] * psi_j
        out = term if out is None else out + term
    return out
