"""Minimal dense linear algebra: products, norms, permutations, masks.

Matrices are plain 2-D float64 numpy arrays in C (row-major) order.  All
functions here are pure; inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def as_matrix(values) -> np.ndarray:
    """Coerce input to a 2-D float64 C-order array, validating shape and finiteness."""
    m = np.ascontiguousarray(values, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def require_nonnegative(m: np.ndarray, label: str = "matrix") -> None:
    if np.any(m < 0.0):
        raise ValueError(f"{label} must be entrywise non-negative")


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with an explicit dimension check."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"inner dimensions differ: {a.shape} x {b.shape}")
    return a @ b


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    """sqrt(sum((a - b)**2)); zero iff the matrices are equal."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def nonzero_mask(m: np.ndarray, threshold: float) -> np.ndarray:
    """Boolean mask of entries whose magnitude exceeds ``threshold``."""
    if threshold < 0.0:
        raise ValueError("threshold must be >= 0")
    return np.abs(as_matrix(m)) > threshold


@dataclass(frozen=True, eq=False)
class PermutationMatrix:
    """A permutation stored as a row-to-column assignment.

    ``mapping[i]`` is the column holding the 1 in row i of the materialized
    matrix.  The mapping must be a bijection on 0..size-1.
    """

    mapping: tuple[int, ...]

    def __post_init__(self):
        n = len(self.mapping)
        if n < 1:
            raise ValueError("permutation must have positive size")
        if sorted(self.mapping) != list(range(n)):
            raise ValueError(f"mapping is not a bijection on 0..{n - 1}: {self.mapping}")
        object.__setattr__(self, "mapping", tuple(int(i) for i in self.mapping))

    @property
    def size(self) -> int:
        return len(self.mapping)

    def inverse_mapping(self) -> np.ndarray:
        """inv with inv[c] = the row whose 1 sits in column c."""
        inv = np.empty(self.size, dtype=np.intp)
        for row, col in enumerate(self.mapping):
            inv[col] = row
        return inv

    def as_matrix(self) -> np.ndarray:
        p = np.zeros((self.size, self.size))
        for row, col in enumerate(self.mapping):
            p[row, col] = 1.0
        return p

    def is_identity(self) -> bool:
        return all(i == c for i, c in enumerate(self.mapping))

    def __eq__(self, other) -> bool:
        return isinstance(other, PermutationMatrix) and self.mapping == other.mapping

    def __hash__(self) -> int:
        return hash(self.mapping)


def permute(w: np.ndarray, h: np.ndarray, p: PermutationMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Return (W P, P^-1 H) by pure reindexing.

    No arithmetic is performed: entries of the results are entries of the
    inputs, so the factor product is preserved up to summation reordering.
    """
    w = as_matrix(w)
    h = as_matrix(h)
    if w.shape[1] != p.size or h.shape[0] != p.size:
        raise ValueError(
            f"permutation size {p.size} does not match factor dims {w.shape} x {h.shape}"
        )
    inv = p.inverse_mapping()
    return np.ascontiguousarray(w[:, inv]), np.ascontiguousarray(h[inv, :])
