"""Bivariate polynomials on dense triangular coefficient tables.

A polynomial p(x, y) = sum_{j+k<=n} c[j, k] x^j y^k of degree n is stored as
a square complex array of shape (n+1, n+1); entries with j + k > n are kept
identically zero.  Degrees in this package stay small (n <~ 30), so the dense
table keeps every index computation trivial and sparse inputs are simply
detected by scanning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Coefficients at or below this fraction of the largest one count as
# structural zeros when the exact degree is determined.
DEGREE_TRIM_REL = 1e-14


class DegenerateInputError(ValueError):
    """Input polynomial is too degenerate for the requested construction."""


class LeadingCoefficientError(ValueError):
    """The top coefficient of a univariate polynomial vanishes; the caller
    must deflate the degree before asking for roots."""


def _trim_table(table: np.ndarray) -> np.ndarray:
    """Return the square table cut down to the exact degree.

    The exact degree is the largest j + k carrying a coefficient whose
    magnitude exceeds DEGREE_TRIM_REL times the largest magnitude in the
    table; smaller entries on discarded bands are treated as structural
    zeros.  The zero polynomial comes back as a 1x1 zero table.
    """
    size = table.shape[0]
    mags = np.abs(table)
    top = mags.max() if size else 0.0
    if top == 0.0:
        return np.zeros((1, 1), dtype=complex)
    threshold = DEGREE_TRIM_REL * top
    degree = 0
    for j in range(size):
        for k in range(size - j):
            if mags[j, k] > threshold:
                degree = max(degree, j + k)
    out = np.zeros((degree + 1, degree + 1), dtype=complex)
    for j in range(degree + 1):
        for k in range(degree + 1 - j):
            if mags[j, k] > 0.0:
                out[j, k] = table[j, k]
    # entries outside the triangle of the trimmed degree are dropped
    return out


class BivariatePolynomial:
    """Scalar bivariate polynomial with complex coefficients.

    Parameters
    ----------
    coeffs : array_like
        Square table c[j, k] multiplying x^j y^k.  Entries with j + k
        beyond the exact degree are discarded (they must be numerically
        negligible); the stored table always has shape (degree+1, degree+1).
    """

    __slots__ = ("coeffs", "degree")

    def __init__(self, coeffs):
        arr = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"coefficient table must be square, got {arr.shape}")
        if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
            raise ValueError("coefficients must be finite")
        table = _trim_table(arr)
        self.coeffs = table
        self.degree = table.shape[0] - 1

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "BivariatePolynomial":
        return cls(np.zeros((1, 1)))

    @classmethod
    def from_rows(cls, rows) -> "BivariatePolynomial":
        """Build from a triangular list of rows; row j holds the
        coefficients of x^j y^k for k = 0..n-j."""
        n = len(rows) - 1
        table = np.zeros((n + 1, n + 1), dtype=complex)
        for j, row in enumerate(rows):
            if len(row) != n + 1 - j:
                raise ValueError(f"row {j} must have {n + 1 - j} entries")
            table[j, : n + 1 - j] = row
        return cls(table)

    @classmethod
    def from_terms(cls, terms: dict) -> "BivariatePolynomial":
        """Build from a {(j, k): coefficient} mapping."""
        if not terms:
            return cls.zero()
        n = max(j + k for j, k in terms)
        table = np.zeros((n + 1, n + 1), dtype=complex)
        for (j, k), c in terms.items():
            table[j, k] = c
        return cls(table)

    # -- basic queries -----------------------------------------------------

    def coeff_norm(self) -> float:
        """Largest coefficient magnitude (the scale of the polynomial)."""
        return float(np.abs(self.coeffs).max())

    @property
    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0, 0] == 0

    def terms(self):
        """Yield (j, k, coefficient) for every nonzero term."""
        n = self.degree
        for j in range(n + 1):
            for k in range(n + 1 - j):
                c = self.coeffs[j, k]
                if c != 0:
                    yield j, k, c

    def __repr__(self):
        return f"BivariatePolynomial(degree={self.degree})"

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x: complex, y: complex) -> complex:
        """Evaluate with nested Horner recurrences (y innermost)."""
        n = self.degree
        acc = 0.0 + 0.0j
        for j in range(n, -1, -1):
            row = self.coeffs[j]
            inner = 0.0 + 0.0j
            for k in range(n - j, -1, -1):
                inner = inner * y + row[k]
            acc = acc * x + inner
        return complex(acc)

    # -- arithmetic ---------------------------------------------------------

    def _padded(self, size: int) -> np.ndarray:
        out = np.zeros((size, size), dtype=complex)
        m = self.coeffs.shape[0]
        out[:m, :m] = self.coeffs
        return out

    def __add__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        size = max(self.degree, other.degree) + 1
        return BivariatePolynomial(self._padded(size) + other._padded(size))

    def __sub__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        size = max(self.degree, other.degree) + 1
        return BivariatePolynomial(self._padded(size) - other._padded(size))

    def scale(self, factor: complex) -> "BivariatePolynomial":
        return BivariatePolynomial(self.coeffs * factor)

    def __mul__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        da, db = self.degree, other.degree
        out = np.zeros((da + db + 1, da + db + 1), dtype=complex)
        for j, k, c in self.terms():
            out[j : j + db + 1, k : k + db + 1] += c * other.coeffs
        return BivariatePolynomial(out)

    def divide_y_power(self, power: int) -> "BivariatePolynomial":
        """Exact division by y**power; rows k < power must already be zero."""
        n = self.degree
        if n + 1 <= power:
            return BivariatePolynomial.zero()
        out = np.zeros((n + 1 - power, n + 1 - power), dtype=complex)
        for j in range(n + 1 - power):
            for k in range(n + 1 - power - j):
                out[j, k] = self.coeffs[j, k + power]
        return BivariatePolynomial(out)

    # -- calculus ------------------------------------------------------------

    def derivative(self, variable: str) -> "BivariatePolynomial":
        n = self.degree
        if n == 0:
            return BivariatePolynomial.zero()
        out = np.zeros((n, n), dtype=complex)
        if variable == "x":
            for j in range(1, n + 1):
                for k in range(n + 1 - j):
                    out[j - 1, k] = j * self.coeffs[j, k]
        elif variable == "y":
            for j in range(n):
                for k in range(1, n + 1 - j):
                    out[j, k - 1] = k * self.coeffs[j, k]
        else:
            raise ValueError("variable must be 'x' or 'y'")
        return BivariatePolynomial(out)

    # -- change of variables ---------------------------------------------------

    def substitute(self, sub: "AffineSubstitution") -> "BivariatePolynomial":
        """Coefficients of p(E (x', y') + t) via bivariate Horner."""
        e, t = sub.linear, sub.shift
        x_new = BivariatePolynomial.from_terms(
            {(0, 0): t[0], (1, 0): e[0, 0], (0, 1): e[0, 1]}
        )
        y_new = BivariatePolynomial.from_terms(
            {(0, 0): t[1], (1, 0): e[1, 0], (0, 1): e[1, 1]}
        )
        n = self.degree
        acc = BivariatePolynomial.zero()
        for j in range(n, -1, -1):
            inner = BivariatePolynomial.zero()
            for k in range(n - j, -1, -1):
                inner = inner * y_new + BivariatePolynomial([[self.coeffs[j, k]]])
            acc = acc * x_new + inner
        return acc


@dataclass(frozen=True)
class AffineSubstitution:
    """Invertible affine change of variables (x, y) = E (x', y') + t."""

    linear: np.ndarray
    shift: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.linear, dtype=complex).reshape(2, 2)
        t = np.asarray(self.shift, dtype=complex).reshape(2)
        if abs(np.linalg.det(e)) == 0.0:
            raise ValueError("substitution matrix must be invertible")
        object.__setattr__(self, "linear", e)
        object.__setattr__(self, "shift", t)

    @classmethod
    def identity(cls) -> "AffineSubstitution":
        return cls(np.eye(2), np.zeros(2))

    @classmethod
    def shear_x(cls, s: complex, t: complex) -> "AffineSubstitution":
        """x = x' + s y' + t, y = y'."""
        return cls(np.array([[1.0, s], [0.0, 1.0]]), np.array([t, 0.0]))

    @classmethod
    def shear_y(cls, u: complex, v: complex) -> "AffineSubstitution":
        """x = x', y = u x' + y' + v."""
        return cls(np.array([[1.0, 0.0], [u, 1.0]]), np.array([0.0, v]))

    @classmethod
    def rotate_y(cls, gamma: complex) -> "AffineSubstitution":
        """x = x', y = y' + gamma x' (used to repair a vanishing x^n term)."""
        return cls.shear_y(gamma, 0.0)

    def inverse(self) -> "AffineSubstitution":
        e_inv = np.linalg.inv(self.linear)
        return AffineSubstitution(e_inv, -e_inv @ self.shift)

    def compose(self, inner: "AffineSubstitution") -> "AffineSubstitution":
        """Map applying `inner` first: (x,y) = self(inner(x'', y''))."""
        return AffineSubstitution(
            self.linear @ inner.linear, self.linear @ inner.shift + self.shift
        )

    def apply_point(self, x: complex, y: complex) -> tuple[complex, complex]:
        v = self.linear @ np.array([x, y]) + self.shift
        return complex(v[0]), complex(v[1])

    @property
    def is_identity(self) -> bool:
        return bool(
            np.array_equal(self.linear, np.eye(2)) and np.array_equal(self.shift, np.zeros(2))
        )


class MatrixBivariatePolynomial:
    """Bivariate polynomial whose coefficients are square k x k blocks."""

    __slots__ = ("coeffs", "degree", "block_size")

    def __init__(self, coeffs):
        arr = np.asarray(coeffs, dtype=complex)
        if arr.ndim != 4 or arr.shape[0] != arr.shape[1] or arr.shape[2] != arr.shape[3]:
            raise ValueError(f"expected shape (n+1, n+1, k, k), got {arr.shape}")
        if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
            raise ValueError("coefficients must be finite")
        size, block = arr.shape[0], arr.shape[2]
        mags = np.abs(arr).max(axis=(2, 3))
        top = mags.max()
        if top == 0.0:
            table = np.zeros((1, 1, block, block), dtype=complex)
        else:
            threshold = DEGREE_TRIM_REL * top
            degree = 0
            for j in range(size):
                for k in range(size - j):
                    if mags[j, k] > threshold:
                        degree = max(degree, j + k)
            table = np.zeros((degree + 1, degree + 1, block, block), dtype=complex)
            for j in range(degree + 1):
                for k in range(degree + 1 - j):
                    table[j, k] = arr[j, k]
        self.coeffs = table
        self.degree = table.shape[0] - 1
        self.block_size = block

    @classmethod
    def from_blocks(cls, blocks: dict, block_size: int) -> "MatrixBivariatePolynomial":
        """Build from a {(j, k): k x k array} mapping."""
        n = max((j + k for j, k in blocks), default=0)
        table = np.zeros((n + 1, n + 1, block_size, block_size), dtype=complex)
        for (j, k), blk in blocks.items():
            table[j, k] = blk
        return cls(table)

    def coeff_norm(self) -> float:
        return float(np.abs(self.coeffs).max())

    def terms(self):
        n = self.degree
        for j in range(n + 1):
            for k in range(n + 1 - j):
                blk = self.coeffs[j, k]
                if np.any(blk != 0):
                    yield j, k, blk

    def entry(self, row: int, col: int) -> BivariatePolynomial:
        """Scalar polynomial sitting at a fixed block entry."""
        return BivariatePolynomial(self.coeffs[:, :, row, col])

    def __call__(self, x: complex, y: complex) -> np.ndarray:
        k = self.block_size
        acc = np.zeros((k, k), dtype=complex)
        for j, kk, blk in self.terms():
            acc += (x**j) * (y**kk) * blk
        return acc


# -- module-level operation surface ------------------------------------------


def evaluate(p: BivariatePolynomial, x: complex, y: complex) -> complex:
    """Value of p at (x, y)."""
    return p(x, y)


def evaluate_matrix(P: MatrixBivariatePolynomial, x: complex, y: complex) -> np.ndarray:
    """Value of a matrix polynomial at (x, y)."""
    return P(x, y)


def univariate_roots(coeffs) -> np.ndarray:
    """All roots of c[0] + c[1] t + ... + c[m] t^m, sorted by ascending
    modulus with ties broken by ascending real part, then imaginary part.

    Roots are eigenvalues of the companion matrix of the monic
    normalization; the LAPACK eigensolver balances the matrix internally.
    """
    c = np.asarray(coeffs, dtype=complex).ravel()
    if c.size < 2:
        raise ValueError("need at least a degree-1 polynomial")
    scale = np.abs(c).max()
    if scale == 0.0 or abs(c[-1]) <= DEGREE_TRIM_REL * scale:
        raise LeadingCoefficientError(
            "leading coefficient vanishes; deflate the degree before rootfinding"
        )
    monic = c / c[-1]
    m = c.size - 1
    if m == 1:
        roots = np.array([-monic[0]], dtype=complex)
    else:
        companion = np.zeros((m, m), dtype=complex)
        companion[1:, :-1] = np.eye(m - 1)
        companion[:, -1] = -monic[:-1]
        roots = np.linalg.eigvals(companion)
    # quantize the modulus and real-part keys so that roots equal up to
    # rounding noise actually reach the tie-breaks
    quantum = 1e-12 * max(np.abs(roots).max(), 1e-300)
    order = np.lexsort(
        (roots.imag, np.round(roots.real / quantum), np.round(np.abs(roots) / quantum))
    )
    return roots[order]


def apply_substitution(p: BivariatePolynomial, sub: AffineSubstitution) -> BivariatePolynomial:
    """Coefficients of p after the affine change of variables."""
    return p.substitute(sub)


def partial_derivatives(
    p: BivariatePolynomial,
) -> tuple[BivariatePolynomial, BivariatePolynomial]:
    """(dp/dx, dp/dy) as polynomials."""
    return p.derivative("x"), p.derivative("y")
