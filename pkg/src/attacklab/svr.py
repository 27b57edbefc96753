"""Epsilon-insensitive support vector regression trained by SMO.

The dual is solved in its 2n-variable form: ``beta = [alpha; alpha_star]`` with
``sign = [+1; -1]``, minimizing ``0.5 beta'Q beta + p'beta`` subject to
``sign'beta = 0`` and ``0 <= beta <= C``, where ``Q_ij = sign_i sign_j K_ij`` and
``p = [eps - y; eps + y]``. Working pairs are chosen by maximal violation for the
first index and second-order gain for the second.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ContractViolation, ConvergenceError

TAU = 1e-12


def kernel_matrix(A, B, kind: str, gamma: float) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if kind == "linear":
        return A @ B.T
    if kind == "rbf":
        sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * (A @ B.T)
        return np.exp(-gamma * np.maximum(sq, 0.0))
    raise ContractViolation(f"unknown kernel {kind!r}")


@dataclass
class SmoResult:
    coef: np.ndarray
    bias: float
    iterations: int
    gap: float


def solve_dual(K: np.ndarray, y: np.ndarray, C: float, eps: float, tol: float = 1e-3,
               max_iter: Optional[int] = None) -> SmoResult:
    """Returns ``coef = alpha - alpha_star`` and the bias of the regression function."""
    n = len(y)
    if max_iter is None:
        max_iter = max(100_000, 100 * n)
    sign = np.concatenate([np.ones(n), -np.ones(n)])
    idx = np.concatenate([np.arange(n), np.arange(n)])
    p = np.concatenate([eps - y, eps + y])
    beta = np.zeros(2 * n)
    grad = p.copy()
    kd = np.diag(K)
    gap = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        yg = -sign * grad
        up = np.where(sign > 0, beta < C, beta > 0)
        low = np.where(sign > 0, beta > 0, beta < C)
        if not up.any() or not low.any():
            gap = 0.0
            break
        yg_up = np.where(up, yg, -np.inf)
        i = int(np.argmax(yg_up))
        m = yg_up[i]
        yg_low = np.where(low, yg, np.inf)
        gap = m - float(np.min(yg_low))
        if gap < tol:
            break
        ii = idx[i]
        # second-order choice of the partner among violating lower-set indices
        b = m - yg
        a = kd[ii] + kd[idx] - 2.0 * K[ii, idx]
        a = np.where(a > 0, a, TAU)
        cand = low & (b > 0)
        score = np.where(cand, -(b * b) / a, np.inf)
        j = int(np.argmin(score))
        jj = idx[j]
        # move beta_i by +sign_i t and beta_j by -sign_j t along the equality constraint
        t = b[j] / a[j]
        t = min(t, C - beta[i] if sign[i] > 0 else beta[i])
        t = min(t, beta[j] if sign[j] > 0 else C - beta[j])
        if t <= 0:
            raise ConvergenceError("SMO step collapsed to zero")
        beta[i] += sign[i] * t
        beta[j] -= sign[j] * t
        grad += sign * t * (K[idx, ii] - K[idx, jj])
    else:
        raise ConvergenceError(f"SMO did not reach KKT gap {tol} in {max_iter} iterations (gap {gap:.3g})")
    np.clip(beta, 0.0, C, out=beta)
    coef = beta[:n] - beta[n:]
    yg = -sign * grad
    free = (beta > 0) & (beta < C)
    if free.any():
        bias = float(np.mean(yg[free]))
    else:
        up = np.where(sign > 0, beta < C, beta > 0)
        low = np.where(sign > 0, beta > 0, beta < C)
        hi = float(np.max(yg[up])) if up.any() else 0.0
        lo = float(np.min(yg[low])) if low.any() else hi
        bias = 0.5 * (hi + lo)
    return SmoResult(coef, bias, it, float(gap))


class EpsilonSVR:
    """Single-output regressor. ``fit`` keeps only the support vectors."""

    def __init__(self, C: float = 10.0, epsilon: float = 0.1, kernel: str = "rbf", gamma: float = 1.0,
                 tol: float = 1e-3, max_iter: Optional[int] = None):
        if not (C > 0 and epsilon >= 0 and gamma > 0):
            raise ContractViolation("need C > 0, epsilon >= 0, gamma > 0")
        self.C = float(C)
        self.epsilon = float(epsilon)
        self.kernel = kernel
        self.gamma = float(gamma)
        self.tol = tol
        self.max_iter = max_iter
        self.support_vectors = np.zeros((0, 0))
        self.dual_coef = np.zeros(0)
        self.bias = 0.0
        self.iterations = 0

    def fit(self, X, y) -> "EpsilonSVR":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float).ravel()
        if X.ndim != 2 or len(X) != len(y) or len(y) == 0:
            raise ContractViolation("X must be (n, d) with one target per row")
        K = kernel_matrix(X, X, self.kernel, self.gamma)
        res = solve_dual(K, y, self.C, self.epsilon, self.tol, self.max_iter)
        sv = res.coef != 0.0
        self.support_vectors = X[sv].copy()
        self.dual_coef = res.coef[sv].copy()
        self.bias = res.bias
        self.iterations = res.iterations
        self.kkt_gap = res.gap
        self._all_coef = res.coef
        return self

    @property
    def n_support(self) -> int:
        return len(self.dual_coef)

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.n_support == 0:
            return np.full(len(X), self.bias)
        return kernel_matrix(X, self.support_vectors, self.kernel, self.gamma) @ self.dual_coef + self.bias

    def to_dict(self):
        return {
            "C": self.C, "epsilon": self.epsilon, "kernel": self.kernel, "gamma": self.gamma, "tol": self.tol,
            "support_vectors": self.support_vectors.tolist(), "dual_coef": self.dual_coef.tolist(),
            "bias": self.bias, "iterations": self.iterations,
        }

    @classmethod
    def from_dict(cls, d) -> "EpsilonSVR":
        m = cls(d["C"], d["epsilon"], d["kernel"], d["gamma"], d.get("tol", 1e-3))
        sv = np.asarray(d["support_vectors"], dtype=float)
        m.support_vectors = sv.reshape(-1, sv.shape[1] if sv.ndim == 2 else 0)
        m.dual_coef = np.asarray(d["dual_coef"], dtype=float)
        m.bias = float(d["bias"])
        m.iterations = int(d.get("iterations", 0))
        return m
