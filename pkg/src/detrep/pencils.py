"""Linear matrix pencils A + x B + y C."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Pencil:
    """Triple of square complex matrices; `size` counts blocks of edge
    length `block_size`, so the matrices have shape (size*block_size,)**2."""

    size: int
    block_size: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        dim = self.size * self.block_size
        for name in ("A", "B", "C"):
            mat = np.asarray(getattr(self, name), dtype=complex)
            if mat.shape != (dim, dim):
                raise ValueError(f"{name} must have shape {(dim, dim)}, got {mat.shape}")
            object.__setattr__(self, name, mat)

    @property
    def dim(self) -> int:
        return self.size * self.block_size

    def __call__(self, x: complex, y: complex) -> np.ndarray:
        return self.A + x * self.B + y * self.C

    def determinant(self, x: complex, y: complex) -> complex:
        return complex(np.linalg.det(self(x, y)))
