"""Shared dense linear-algebra helpers: tolerances, sign fixing, power iteration."""

from __future__ import annotations

import numpy as np


def zero_tolerance(sigma_max: float, override: float | None = None) -> float:
    """Scale-aware threshold below which an eigenvalue counts as zero.

    Singular values are compared against the square root of this value,
    eigenvalues of the (squared) Laplacians against the value itself.
    """
    if override is not None:
        return float(override)
    return 1e-10 * max(1.0, float(sigma_max))


def largest_singular_value(*mats: np.ndarray) -> float:
    vals = [np.linalg.norm(m, 2) for m in mats if m is not None and m.size]
    return max(vals) if vals else 0.0


def fix_column_signs(u: np.ndarray, tol: float) -> np.ndarray:
    """Flip column signs so the first entry of magnitude > tol is positive."""
    u = np.array(u, copy=True)
    for j in range(u.shape[1]):
        idx = np.flatnonzero(np.abs(u[:, j]) > tol)
        if idx.size and u[idx[0], j] < 0:
            u[:, j] = -u[:, j]
    return u


def orthonormal_complement(blocks: list[np.ndarray], n: int, dim: int) -> np.ndarray:
    """Orthonormal basis of the complement of the span of the given blocks.

    The complement is obtained from the SVD of the projector onto it, which
    keeps the result orthogonal to every block column to machine precision.
    """
    if dim <= 0:
        return np.zeros((n, 0))
    p = np.eye(n)
    for b in blocks:
        if b.size:
            p -= b @ b.T
    u, _, _ = np.linalg.svd(p)
    return u[:, :dim]


def power_iteration_lambda_max(matvec, n: int, rtol: float = 1e-6,
                               max_iter: int = 5000) -> float:
    """Largest eigenvalue of a symmetric PSD operator given by its matvec."""
    if n == 0:
        return 0.0
    rng = np.random.default_rng(0)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = matvec(v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v_new = w / norm
        lam_new = float(v_new @ matvec(v_new))
        if abs(lam_new - lam) <= rtol * max(abs(lam_new), 1e-30):
            return lam_new
        v, lam = v_new, lam_new
    return lam
