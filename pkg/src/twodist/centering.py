"""Orthonormal bases of the all-ones complement and matrix projection onto it.

The dense scheme works for every n >= 2; the block scheme (n >= 4) splits the
basis into a 3-node block and an (n-3)-node block and exists mainly for
cross-validation, since any two valid bases give identical projected spectra.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SCHEME_DENSE = "dense"
SCHEME_BLOCK = "block"


@dataclass(frozen=True)
class VBasis:
    """n x (n-1) matrix with orthonormal columns spanning the complement of e."""

    n: int
    columns: np.ndarray
    scheme: str


def _dense_columns(n: int) -> np.ndarray:
    y = -1.0 / np.sqrt(n)
    x = -1.0 / (n + np.sqrt(n))
    top = np.full((1, n - 1), y)
    bottom = np.eye(n - 1) + x * np.ones((n - 1, n - 1))
    return np.vstack([top, bottom])


@lru_cache(maxsize=128)
def build_v(n: int, scheme: str = SCHEME_DENSE) -> VBasis:
    """Orthonormal basis of the hyperplane orthogonal to the all-ones vector.

    Cached per (n, scheme); the returned columns are marked read-only.
    """
    v = _build_v(n, scheme)
    v.columns.flags.writeable = False
    return v


def _build_v(n: int, scheme: str) -> VBasis:
    if scheme == SCHEME_DENSE:
        if n < 2:
            raise ValueError(f"dense scheme requires n >= 2, got {n}")
        return VBasis(n, _dense_columns(n), scheme)
    if scheme == SCHEME_BLOCK:
        if n < 4:
            raise ValueError(f"block scheme requires n >= 4, got {n}")
        v3 = _dense_columns(3)
        vrest = _dense_columns(n - 3) if n - 3 >= 2 else np.zeros((n - 3, 0))
        a = np.sqrt((n - 3) / (3.0 * n))
        b = -np.sqrt(3.0 / (n * (n - 3)))
        cols = np.zeros((n, n - 1))
        cols[:3, :2] = v3
        cols[3:, 2:n - 2] = vrest
        cols[:3, n - 2] = a
        cols[3:, n - 2] = b
        return VBasis(n, cols, scheme)
    raise ValueError(f"unknown scheme {scheme!r}")


def projected_gram(d: np.ndarray, v: VBasis) -> np.ndarray:
    """Projected Gram matrix -1/2 V.T @ d @ V of a zero-diagonal matrix d."""
    d = np.asarray(d, dtype=float)
    if d.shape != (v.n, v.n):
        raise ValueError(f"order mismatch: matrix {d.shape}, basis n={v.n}")
    if np.max(np.abs(np.diag(d))) > 0:
        raise ValueError("matrix has nonzero diagonal")
    x = -0.5 * (v.columns.T @ d @ v.columns)
    return 0.5 * (x + x.T)


def project_adjacency(a: np.ndarray, v: VBasis) -> np.ndarray:
    """V.T @ a @ V for an adjacency matrix a."""
    a = np.asarray(a, dtype=float)
    if a.shape != (v.n, v.n):
        raise ValueError(f"order mismatch: matrix {a.shape}, basis n={v.n}")
    m = v.columns.T @ a @ v.columns
    return 0.5 * (m + m.T)
