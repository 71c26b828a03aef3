"""Self-contained Hermitian eigensolver.

Householder reduction to a real symmetric tridiagonal matrix followed by the
implicitly shifted QL iteration. Used as an alternative to the LAPACK drivers
and as a cross-check for them.
"""

from __future__ import annotations

import hashlib
import math
from typing import Final

import numpy as np

from .const import LOGGER
from .exceptions import ConvergenceError, InvalidInputError

HERMITIAN_TOLERANCE: Final = 1e-12
MAX_QL_ITERATIONS: Final = 60


def matrix_fingerprint(matrix: np.ndarray) -> str:
    """Return a short, stable identifier of a matrix."""
    digest = hashlib.sha1(
        np.ascontiguousarray(matrix).tobytes(), usedforsecurity=False
    ).hexdigest()
    return f"{matrix.shape[0]}x{matrix.shape[1]}:{digest[:16]}"


def _check_hermitian(matrix: np.ndarray) -> np.ndarray:
    """Validate shape and symmetry, return a complex working copy."""
    matrix = np.asarray(matrix)
    square = matrix.ndim == 2 and matrix.shape[0] == matrix.shape[1]  # noqa: PLR2004
    if not square or not matrix.size:
        message = f"Expected a non-empty square matrix, got shape {matrix.shape}"
        raise InvalidInputError(message)
    work = np.array(matrix, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(work))))
    asymmetry = float(np.max(np.abs(work - work.conj().T)))
    if asymmetry > HERMITIAN_TOLERANCE * scale:
        message = f"Matrix is not Hermitian: max |A - A*| = {asymmetry:.3e}"
        raise InvalidInputError(message)
    return work


def householder_tridiagonal(
    matrix: np.ndarray, *, accumulate: bool = False
) -> tuple[np.ndarray, np.ndarray, np.ndarray | None]:
    """Reduce a Hermitian matrix to real tridiagonal form.

    Returns the diagonal, the nonnegative off-diagonal and, when requested,
    the unitary Q with A = Q T Q*.
    """
    work = _check_hermitian(matrix)
    n = work.shape[0]
    q = np.eye(n, dtype=complex) if accumulate else None
    for k in range(n - 2):
        x = work[k + 1 :, k]
        norm = float(np.linalg.norm(x))
        if norm == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        alpha = -phase * norm
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        block = work[k + 1 :, k + 1 :]
        p = block @ v
        w = p - np.vdot(v, p) * v
        block -= 2.0 * (np.outer(v, w.conj()) + np.outer(w, v.conj()))
        work[k + 1 :, k] = 0.0
        work[k, k + 1 :] = 0.0
        work[k + 1, k] = alpha
        work[k, k + 1] = np.conj(alpha)
        if q is not None:
            q[:, k + 1 :] -= 2.0 * np.outer(q[:, k + 1 :] @ v, v.conj())

    diagonal = work.diagonal().real.copy()
    off = np.array([work[k + 1, k] for k in range(n - 1)], dtype=complex)
    magnitude = np.abs(off)
    if q is not None:
        # Diagonal phases turning the complex off-diagonal into |off|.
        phases = np.ones(n, dtype=complex)
        for k in range(n - 1):
            step = off[k] / magnitude[k] if magnitude[k] > 0.0 else 1.0
            phases[k + 1] = phases[k] * step
        q = q * phases[np.newaxis, :]
    return diagonal, magnitude, q


def _ql_implicit(
    diagonal: np.ndarray,
    off_diagonal: np.ndarray,
    vectors: np.ndarray | None,
    fingerprint: str,
) -> None:
    """Diagonalize a symmetric tridiagonal matrix in place."""
    d = diagonal
    n = len(d)
    e = np.zeros(n)
    e[: n - 1] = off_diagonal
    for first in range(n):
        iterations = 0
        while True:
            last = first
            while last < n - 1:
                scale = abs(d[last]) + abs(d[last + 1])
                if abs(e[last]) + scale == scale:
                    break
                last += 1
            if last == first:
                break
            if iterations == MAX_QL_ITERATIONS:
                message = (
                    f"QL iteration did not converge for eigenvalue {first} "
                    f"of matrix {fingerprint}"
                )
                raise ConvergenceError(
                    message, fingerprint=fingerprint, trail=list(d[: first + 1])
                )
            iterations += 1
            g = (d[first + 1] - d[first]) / (2.0 * e[first])
            r = math.hypot(g, 1.0)
            g = d[last] - d[first] + e[first] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = last - 1
            while i >= first:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[last] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if vectors is not None:
                    column = vectors[:, i + 1].copy()
                    vectors[:, i + 1] = s * vectors[:, i] + c * column
                    vectors[:, i] = c * vectors[:, i] - s * column
                i -= 1
            else:
                d[first] -= p
                e[first] = g
                e[last] = 0.0


def eig_tridiagonal(
    diagonal: np.ndarray, off_diagonal: np.ndarray, *, eigenvectors: bool = False
) -> np.ndarray | tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a real symmetric tridiagonal matrix."""
    d = np.array(diagonal, dtype=float)
    e = np.array(off_diagonal, dtype=float)
    if len(e) != max(len(d) - 1, 0):
        message = f"Off-diagonal length {len(e)} does not match diagonal {len(d)}"
        raise InvalidInputError(message)
    vectors = np.eye(len(d)) if eigenvectors else None
    fingerprint = matrix_fingerprint(np.stack([d, np.append(e, 0.0)]))
    _ql_implicit(d, e, vectors, fingerprint)
    order = np.argsort(d, kind="stable")
    if vectors is None:
        return d[order]
    return d[order], vectors[:, order]


def eig_hermitian(
    matrix: np.ndarray, *, eigenvectors: bool = False
) -> np.ndarray | tuple[np.ndarray, np.ndarray]:
    """Return ascending eigenvalues of a Hermitian matrix, vectors on request."""
    diagonal, off, q = householder_tridiagonal(matrix, accumulate=eigenvectors)
    vectors = np.eye(len(diagonal)) if eigenvectors else None
    fingerprint = matrix_fingerprint(np.asarray(matrix))
    try:
        _ql_implicit(diagonal, off, vectors, fingerprint)
    except ConvergenceError:
        LOGGER.error("Eigensolver failed on matrix %s", fingerprint)
        raise
    order = np.argsort(diagonal, kind="stable")
    if vectors is None or q is None:
        return diagonal[order]
    return diagonal[order], (q @ vectors)[:, order]
