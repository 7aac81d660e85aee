"""Hodge and Dirac spectral machinery: subspace bases, topological Fourier
transforms, typed frequencies, and signal decomposition.

Bases are built from singular value decompositions of the incidence matrices
rather than from an eigendecomposition of L_k: that keeps every column
exactly inside its subspace even when a gradient and a curl eigenvalue
coincide. Frequencies are the squared singular values — the squared l2-norm
of the divergence for gradient columns and of the total curl for curl
columns. Harmonic columns all sit at frequency zero; low/high comparisons
are only meaningful within one frequency type.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._linalg import (
    fix_column_signs,
    largest_singular_value,
    orthonormal_complement,
    zero_tolerance,
)
from .complexes import Cochain, ComplexSignal, SimplicialComplex, incidence

__all__ = [
    "HodgeBasis",
    "TftCoefficients",
    "FrequencyEntry",
    "HodgeComponents",
    "DiracBasis",
    "hodge_basis",
    "tft",
    "itft",
    "hodge_decompose",
    "frequency_table",
    "dirac_basis",
    "dirac_tft",
    "dirac_itft",
]


@dataclass(frozen=True, eq=False)
class HodgeBasis:
    """Orthonormal gradient/curl/harmonic bases with frequencies for order k.

    gradient spans range(b_k^T), curl spans range(b_{k+1}), harmonic spans
    kernel(L_k); the three blocks are mutually orthonormal and their widths
    sum to N_k. Column signs are fixed (first entry of magnitude > tolerance
    positive), so the basis is a deterministic function of the complex.
    """

    complex: SimplicialComplex
    order: int
    gradient: np.ndarray
    curl: np.ndarray
    harmonic: np.ndarray
    gradient_frequencies: np.ndarray
    curl_frequencies: np.ndarray
    tolerance: float

    @property
    def n_gradient(self) -> int:
        return self.gradient.shape[1]

    @property
    def n_curl(self) -> int:
        return self.curl.shape[1]

    @property
    def n_harmonic(self) -> int:
        return self.harmonic.shape[1]

    def matrix(self) -> np.ndarray:
        """Full basis, columns in frequency-table order:
        harmonic, then gradient, then curl."""
        return np.hstack([self.harmonic, self.gradient, self.curl])

    def frequencies(self) -> np.ndarray:
        """Frequencies aligned with :meth:`matrix` columns."""
        return np.concatenate([
            np.zeros(self.n_harmonic),
            self.gradient_frequencies,
            self.curl_frequencies,
        ])


@dataclass(frozen=True)
class TftCoefficients:
    """Blockwise Fourier coefficients; Parseval holds across the blocks."""

    gradient: np.ndarray
    curl: np.ndarray
    harmonic: np.ndarray

    def energy(self) -> float:
        return float(
            self.gradient @ self.gradient
            + self.curl @ self.curl
            + self.harmonic @ self.harmonic
        )


class FrequencyEntry(NamedTuple):
    index: int
    kind: str  # "harmonic" | "gradient" | "curl"
    frequency: float


class HodgeComponents(NamedTuple):
    gradient: Cochain
    curl: Cochain
    harmonic: Cochain
    lower_potential: Cochain | None
    upper_potential: Cochain | None


def _svd_block(mat: np.ndarray | None, side: str, tol_override: float | None,
               sigma_max: float):
    """Singular vectors of one incidence matrix with singular value above
    the rank threshold, in ascending squared-singular-value order."""
    if mat is None or mat.size == 0:
        rows = 0 if mat is None else mat.shape[0 if side == "left" else 1]
        return np.zeros((rows, 0)), np.zeros(0)
    u, s, vt = np.linalg.svd(mat, full_matrices=False)
    thr = zero_tolerance(sigma_max, tol_override) ** 0.5
    keep = s > thr
    vecs = u[:, keep] if side == "left" else vt[keep].T
    freqs = s[keep] ** 2
    return vecs[:, ::-1], freqs[::-1]


def hodge_basis(c: SimplicialComplex, k: int,
                tol: float | None = None) -> HodgeBasis:
    """Typed spectral basis of order k from incidence-matrix SVDs."""
    nk = c.num_simplices(k)
    bk = incidence(c, k, dense=True) if k >= 1 else None
    bk1 = incidence(c, k + 1, dense=True) if k + 1 <= 2 else None
    sigma_max = largest_singular_value(bk, bk1)
    tau = zero_tolerance(sigma_max, tol)

    grad, freq_grad = _svd_block(bk, "right", tol, sigma_max)
    if grad.shape[0] == 0 and bk is None:
        grad = np.zeros((nk, 0))
    curl, freq_curl = _svd_block(bk1, "left", tol, sigma_max)
    if curl.shape[0] == 0 and bk1 is None:
        curl = np.zeros((nk, 0))

    n_h = nk - grad.shape[1] - curl.shape[1]
    harm = orthonormal_complement([grad, curl], nk, n_h)

    return HodgeBasis(
        complex=c,
        order=k,
        gradient=fix_column_signs(grad, tau),
        curl=fix_column_signs(curl, tau),
        harmonic=fix_column_signs(harm, tau),
        gradient_frequencies=freq_grad,
        curl_frequencies=freq_curl,
        tolerance=tau,
    )


def tft(basis: HodgeBasis, x: Cochain) -> TftCoefficients:
    """Blockwise projection U^T x onto the typed basis."""
    if x.order != basis.order:
        raise ValueError(
            f"cochain order {x.order} does not match basis order {basis.order}"
        )
    if x.values.shape[0] != basis.complex.num_simplices(basis.order):
        raise ValueError("cochain length does not match the basis")
    return TftCoefficients(
        gradient=basis.gradient.T @ x.values,
        curl=basis.curl.T @ x.values,
        harmonic=basis.harmonic.T @ x.values,
    )


def itft(basis: HodgeBasis, coeffs: TftCoefficients) -> Cochain:
    """Inverse transform; itft(tft(x)) = x."""
    if (coeffs.gradient.shape[0] != basis.n_gradient
            or coeffs.curl.shape[0] != basis.n_curl
            or coeffs.harmonic.shape[0] != basis.n_harmonic):
        raise ValueError("coefficient block widths do not match the basis")
    values = (
        basis.gradient @ coeffs.gradient
        + basis.curl @ coeffs.curl
        + basis.harmonic @ coeffs.harmonic
    )
    return Cochain(basis.complex, basis.order, values)


def hodge_decompose(c: SimplicialComplex, x: Cochain,
                    tol: float | None = None) -> HodgeComponents:
    """Split x into gradient + curl + harmonic parts with minimum-norm
    potentials.

    gradient = b_k^T p with p the minimum-norm least-squares solution
    (lower potential), curl = b_{k+1} q likewise (upper potential), and
    harmonic is the remainder. The three parts are mutually orthogonal.
    """
    if x.complex is not c:
        raise ValueError("cochain is bound to a different complex")
    k = x.order
    values = x.values

    if k >= 1:
        bkT = incidence(c, k, dense=True).T
        p = np.linalg.lstsq(bkT, values, rcond=None)[0]
        grad_vals = bkT @ p
        lower = Cochain(c, k - 1, p)
    else:
        grad_vals = np.zeros_like(values)
        lower = None

    if k + 1 <= 2:
        bk1 = incidence(c, k + 1, dense=True)
        q = np.linalg.lstsq(bk1, values, rcond=None)[0] if bk1.size else \
            np.zeros(bk1.shape[1])
        curl_vals = bk1 @ q if bk1.size else np.zeros_like(values)
        upper = Cochain(c, k + 1, q)
    else:
        curl_vals = np.zeros_like(values)
        upper = None

    harm_vals = values - grad_vals - curl_vals
    return HodgeComponents(
        gradient=Cochain(c, k, grad_vals),
        curl=Cochain(c, k, curl_vals),
        harmonic=Cochain(c, k, harm_vals),
        lower_potential=lower,
        upper_potential=upper,
    )


def frequency_table(basis: HodgeBasis) -> list[FrequencyEntry]:
    """Ordered typed spectrum: harmonic rows (frequency 0) first, then
    gradient ascending, then curl ascending.

    Frequency magnitudes are comparable only within one type: gradient
    frequencies measure total divergence, curl frequencies total curl.
    """
    rows = []
    i = 0
    for _ in range(basis.n_harmonic):
        rows.append(FrequencyEntry(i, "harmonic", 0.0))
        i += 1
    for f in basis.gradient_frequencies:
        rows.append(FrequencyEntry(i, "gradient", float(f)))
        i += 1
    for f in basis.curl_frequencies:
        rows.append(FrequencyEntry(i, "curl", float(f)))
        i += 1
    return rows


@dataclass(frozen=True, eq=False)
class DiracBasis:
    """Eigenbasis of the Dirac operator grouped into joint subspaces.

    Joint-gradient pairs come from the SVD of b1 as (u; +/-v; 0)/sqrt(2)
    with eigenvalues +/-sigma, joint-curl pairs from the SVD of b2 as
    (0; u; +/-v)/sqrt(2), and the joint-harmonic block stacks the per-order
    harmonic bases (its width is beta0 + beta1 + beta2). Off the kernel the
    spectrum is symmetric: eigenvalues come in +/- pairs.
    """

    complex: SimplicialComplex
    harmonic: np.ndarray
    gradient: np.ndarray
    gradient_eigenvalues: np.ndarray
    curl: np.ndarray
    curl_eigenvalues: np.ndarray
    tolerance: float

    def matrix(self) -> np.ndarray:
        return np.hstack([self.harmonic, self.gradient, self.curl])

    def eigenvalues(self) -> np.ndarray:
        return np.concatenate([
            np.zeros(self.harmonic.shape[1]),
            self.gradient_eigenvalues,
            self.curl_eigenvalues,
        ])


def _dirac_pairs(mat: np.ndarray, embed, dim: int, sigma_max: float,
                 tol: float | None):
    """Signed eigenvector pairs (+sigma then -sigma, sigma ascending)."""
    if mat.size == 0:
        return np.zeros((dim, 0)), np.zeros(0)
    u, s, vt = np.linalg.svd(mat, full_matrices=False)
    thr = zero_tolerance(sigma_max, tol) ** 0.5
    keep = np.flatnonzero(s > thr)[::-1]  # ascending sigma
    cols, vals = [], []
    for i in keep:
        for sign in (1.0, -1.0):
            cols.append(embed(u[:, i], sign * vt[i]) / np.sqrt(2.0))
            vals.append(sign * s[i])
    if not cols:
        return np.zeros((dim, 0)), np.zeros(0)
    return np.column_stack(cols), np.array(vals)


def dirac_basis(c: SimplicialComplex, tol: float | None = None) -> DiracBasis:
    """Joint spectral basis of the Dirac operator."""
    n0, n1, n2 = c.n0, c.n1, c.n2
    dim = n0 + n1 + n2
    b1 = incidence(c, 1, dense=True)
    b2 = incidence(c, 2, dense=True)
    sigma_max = largest_singular_value(b1, b2)
    tau = zero_tolerance(sigma_max, tol)

    grad, lam_g = _dirac_pairs(
        b1, lambda u, v: np.concatenate([u, v, np.zeros(n2)]), dim,
        sigma_max, tol,
    )
    curl_, lam_c = _dirac_pairs(
        b2, lambda u, v: np.concatenate([np.zeros(n0), u, v]), dim,
        sigma_max, tol,
    )

    blocks = []
    offsets = (0, n0, n0 + n1)
    for k, off in zip((0, 1, 2), offsets):
        hk = hodge_basis(c, k, tol).harmonic
        block = np.zeros((dim, hk.shape[1]))
        block[off : off + c.num_simplices(k), :] = hk
        blocks.append(block)
    harm = np.hstack(blocks) if blocks else np.zeros((dim, 0))

    return DiracBasis(
        complex=c,
        harmonic=fix_column_signs(harm, tau),
        gradient=fix_column_signs(grad, tau),
        gradient_eigenvalues=lam_g,
        curl=fix_column_signs(curl_, tau),
        curl_eigenvalues=lam_c,
        tolerance=tau,
    )


def dirac_tft(c: SimplicialComplex, x: ComplexSignal,
              basis: DiracBasis | None = None) -> np.ndarray:
    """Projection of the stacked (x0, x1, x2) onto the Dirac eigenbasis."""
    if x.complex is not c:
        raise ValueError("signal is bound to a different complex")
    if basis is None:
        basis = dirac_basis(c)
    return basis.matrix().T @ x.stacked()


def dirac_itft(c: SimplicialComplex, coeffs: np.ndarray,
               basis: DiracBasis | None = None) -> ComplexSignal:
    """Inverse of :func:`dirac_tft`."""
    if basis is None:
        basis = dirac_basis(c)
    u = basis.matrix()
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (u.shape[1],):
        raise ValueError(f"expected {u.shape[1]} coefficients, got {coeffs.shape}")
    return ComplexSignal.from_stacked(c, u @ coeffs)
