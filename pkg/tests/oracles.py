"""Independent reference implementations used only by the tests.

Everything here deliberately avoids the code paths of the package itself:
evaluation by naive high-precision summation, Kronecker products by index
loops, roots of a system by a Sylvester-resultant elimination, minimal
monomial trees by exhaustive subset enumeration.
"""

from __future__ import annotations

import itertools

import mpmath
import numpy as np


def naive_eval(coeffs, x, y, dps=50):
    """Term-by-term summation in extended precision."""
    with mpmath.workdps(dps):
        acc = mpmath.mpc(0)
        xm = mpmath.mpc(x)
        ym = mpmath.mpc(y)
        n = coeffs.shape[0] - 1
        for j in range(n + 1):
            for k in range(n + 1 - j):
                c = complex(coeffs[j, k])
                if c != 0:
                    acc += mpmath.mpc(c) * xm**j * ym**k
        return complex(acc)


def naive_kron(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    m, n = a.shape
    p, q = b.shape
    out = np.zeros((m * p, n * q), dtype=complex)
    for i in range(m):
        for j in range(n):
            for k in range(p):
                for l in range(q):
                    out[i * p + k, j * q + l] = a[i, j] * b[k, l]
    return out


def central_difference(f, x, y, h=1e-6):
    """Gradient of a scalar function of two complex variables."""
    dx = (f(x + h, y) - f(x - h, y)) / (2 * h)
    dy = (f(x, y + h) - f(x, y - h)) / (2 * h)
    return dx, dy


def smallest_singular_value_2x2(m):
    """sigma_min of a 2x2 matrix from the explicit singular value identity."""
    a = m.conj().T @ m
    tr = a[0, 0].real + a[1, 1].real
    det = abs(np.linalg.det(m)) ** 2
    disc = max(tr * tr / 4.0 - det, 0.0)
    lam_min = max(tr / 2.0 - np.sqrt(disc), 0.0)
    return float(np.sqrt(lam_min))


# -- resultant-based elimination solver ------------------------------------------


def _x_coefficients(coeffs, y):
    """Coefficients in x of p(x, y0), highest degree last."""
    n = coeffs.shape[0] - 1
    return np.array(
        [sum(coeffs[j, k] * y**k for k in range(n + 1 - j)) for j in range(n + 1)],
        dtype=complex,
    )


def _sylvester_det(pc, qc):
    dp = len(pc) - 1
    dq = len(qc) - 1
    size = dp + dq
    s = np.zeros((size, size), dtype=complex)
    for i in range(dq):
        s[i, i : i + dp + 1] = pc[::-1]
    for i in range(dp):
        s[dq + i, i : i + dq + 1] = qc[::-1]
    return complex(np.linalg.det(s))


def resultant_roots(p_coeffs, q_coeffs, radius=1.1, tol=1e-8):
    """All roots of the system by eliminating x through the Sylvester
    resultant in y; y-values are roots of an interpolated determinant
    polynomial, x-values come from p(., y) and are kept when q nearly
    vanishes too.  Iterated 2x2 Newton polishing makes the reference
    values accurate to machine precision."""
    np_ = p_coeffs.shape[0] - 1
    nq = q_coeffs.shape[0] - 1
    deg_bound = np_ * nq + 1

    samples = 2 * deg_bound + 8
    ys = radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    vals = np.array(
        [_sylvester_det(_x_coefficients(p_coeffs, y), _x_coefficients(q_coeffs, y)) for y in ys]
    )
    vander = np.vander(ys, deg_bound + 1, increasing=True)
    res_coeffs, *_ = np.linalg.lstsq(vander, vals, rcond=None)
    trim = np.abs(res_coeffs)
    cutoff = 1e-10 * trim.max()
    top = max(i for i in range(len(res_coeffs)) if trim[i] > cutoff)
    y_candidates = np.roots(res_coeffs[: top + 1][::-1])

    def newton(x, y, iters=40):
        for _ in range(iters):
            f = np.array([_poly_eval(p_coeffs, x, y), _poly_eval(q_coeffs, x, y)])
            j = np.array(
                [
                    [_poly_eval_dx(p_coeffs, x, y), _poly_eval_dy(p_coeffs, x, y)],
                    [_poly_eval_dx(q_coeffs, x, y), _poly_eval_dy(q_coeffs, x, y)],
                ]
            )
            if np.linalg.cond(j) > 1e12:
                break
            step = np.linalg.solve(j, f)
            x, y = x - step[0], y - step[1]
            if np.abs(step).max() < 1e-15 * (1 + abs(x) + abs(y)):
                break
        return x, y

    scale = max(np.abs(p_coeffs).max(), np.abs(q_coeffs).max())
    found = []
    for y0 in y_candidates:
        xc = _x_coefficients(p_coeffs, y0)
        xc = xc[: max(i for i in range(len(xc)) if abs(xc[i]) > 1e-12 * np.abs(xc).max()) + 1]
        if len(xc) < 2:
            continue
        for x0 in np.roots(xc[::-1]):
            if abs(_poly_eval(q_coeffs, x0, y0)) > 1e-4 * scale:
                continue
            x1, y1 = newton(complex(x0), complex(y0))
            resid = max(abs(_poly_eval(p_coeffs, x1, y1)), abs(_poly_eval(q_coeffs, x1, y1)))
            if resid > tol * scale:
                continue
            if all(max(abs(x1 - a), abs(y1 - b)) > 1e-6 for a, b in found):
                found.append((x1, y1))
    return found


def _poly_eval(coeffs, x, y):
    n = coeffs.shape[0] - 1
    return sum(coeffs[j, k] * x**j * y**k for j in range(n + 1) for k in range(n + 1 - j))


def _poly_eval_dx(coeffs, x, y):
    n = coeffs.shape[0] - 1
    return sum(
        j * coeffs[j, k] * x ** (j - 1) * y**k
        for j in range(1, n + 1)
        for k in range(n + 1 - j)
    )


def _poly_eval_dy(coeffs, x, y):
    n = coeffs.shape[0] - 1
    return sum(
        k * coeffs[j, k] * x**j * y ** (k - 1)
        for j in range(n + 1)
        for k in range(1, n + 1 - j)
    )


# -- exhaustive minimal-tree search -----------------------------------------------


def min_covering_tree_size(terms, degree):
    """Minimum node count of a reachable monomial set covering every term,
    by brute-force subset enumeration (practical for degree <= 5)."""
    grid = [(j, k) for j in range(degree) for k in range(degree - j)]
    non_root = [nd for nd in grid if nd != (0, 0)]

    constraints = []
    for (j, k) in terms:
        if j + k < 2:
            continue
        opts = set()
        if j + k < degree:
            opts.add((j, k))
        if j > 0:
            opts.add((j - 1, k))
        if k > 0:
            opts.add((j, k - 1))
        constraints.append(opts)

    best = None
    for size in range(len(non_root) + 1):
        for combo in itertools.combinations(non_root, size):
            nodes = set(combo) | {(0, 0)}
            if not all(
                ((j - 1, k) in nodes or (j, k - 1) in nodes) for (j, k) in combo
            ):
                continue
            if all(opts & nodes for opts in constraints):
                best = size + 1
                break
        if best is not None:
            break
    return best
