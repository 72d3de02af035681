"""Linearization through a representation tree with linear-form edges.

Every node of the tree carries the product of the forms on its root path,
and a linear coefficient form; the polynomial is recovered as the sum of
coefficient times node product.  The main branch is driven by the roots of
the top-degree coefficient slice, the remainder is divisible by y**2 and
handled recursively through a bridge node, and the degree-3/degree-4
special constructions shave one node off after an affine change of
variables (which may push constant offsets into the edge forms of a
substituted subtree; the assembled pencil absorbs them in its A matrix).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pencils import Pencil
from .polynomials import (
    DEGREE_TRIM_REL,
    AffineSubstitution,
    BivariatePolynomial,
    DegenerateInputError,
    LeadingCoefficientError,
    univariate_roots,
)

# remainder rows that must vanish are accepted up to this fraction of the scale
REMAINDER_TOL = 1e-8
# remainder entries below this fraction of the parent scale are roundoff
REMAINDER_CLEAN = 1e-12
# a substitution target coefficient counts as killed below this fraction
VANISH_TOL = 1e-10


@dataclass(frozen=True)
class LinearForm:
    """a + b x + c y."""

    a: complex = 0.0
    b: complex = 0.0
    c: complex = 0.0

    def __call__(self, x: complex, y: complex) -> complex:
        return self.a + self.b * x + self.c * y

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    def as_polynomial(self) -> BivariatePolynomial:
        return BivariatePolynomial.from_terms({(0, 0): self.a, (1, 0): self.b, (0, 1): self.c})

    def compose(self, sub: AffineSubstitution) -> "LinearForm":
        """The form expressed in the new variables of the substitution."""
        e, t = sub.linear, sub.shift
        return LinearForm(
            self.a + self.b * t[0] + self.c * t[1],
            self.b * e[0, 0] + self.c * e[1, 0],
            self.b * e[0, 1] + self.c * e[1, 1],
        )


@dataclass(frozen=True)
class SubstitutionStep:
    """One recorded change of variables (x, y) = map(x', y')."""

    kind: str
    map: AffineSubstitution
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RepresentationTree:
    """Rooted tree; node 0 is the root with polynomial 1.

    parents[i] < i for non-root nodes, so the assembled pencil is lower
    triangular below its first row.  Edge forms are homogeneous (a = 0)
    for trees built without substitutions; substituted subtrees carry
    constant offsets in their edges.
    """

    parents: tuple
    edges: tuple
    coeffs: tuple
    substitution_steps: tuple = ()

    def __post_init__(self):
        m = len(self.parents)
        if m == 0 or self.parents[0] is not None or self.edges[0] is not None:
            raise ValueError("node 0 must be the root (no parent, no edge)")
        if len(self.edges) != m or len(self.coeffs) != m:
            raise ValueError("parents, edges and coeffs must align")
        for i in range(1, m):
            if not 0 <= self.parents[i] < i:
                raise ValueError(f"node {i} needs a parent with smaller index")
            edge = self.edges[i]
            if edge.b == 0 and edge.c == 0:
                raise ValueError(f"edge into node {i} must involve x or y")

    def __len__(self):
        return len(self.parents)

    def node_polynomials(self) -> list[BivariatePolynomial]:
        polys = [BivariatePolynomial([[1.0]])]
        for i in range(1, len(self)):
            polys.append(polys[self.parents[i]] * self.edges[i].as_polynomial())
        return polys

    def reconstruct(self) -> BivariatePolynomial:
        """Sum of coefficient form times node polynomial."""
        total = BivariatePolynomial.zero()
        for f, q in zip(self.coeffs, self.node_polynomials()):
            if not f.is_zero:
                total = total + f.as_polynomial() * q
        return total

    def compose(self, sub: AffineSubstitution) -> "RepresentationTree":
        return RepresentationTree(
            self.parents,
            tuple(None if e is None else e.compose(sub) for e in self.edges),
            tuple(f.compose(sub) for f in self.coeffs),
            self.substitution_steps,
        )

    def with_steps(self, steps: tuple) -> "RepresentationTree":
        return RepresentationTree(self.parents, self.edges, self.coeffs, steps)

    def composed_substitution(self) -> AffineSubstitution:
        total = AffineSubstitution.identity()
        for step in self.substitution_steps:
            total = total.compose(step.map)
        return total


def representation_tree_size(n: int) -> int:
    """Node count of the plain recursive construction for dense degree n."""
    if n < 1:
        raise ValueError("degree must be at least 1")
    if n <= 3:
        return (1, 2, 4)[n - 1]
    return n + 1 + representation_tree_size(n - 3)


# -- pencil assembly ------------------------------------------------------------


def assemble_pencil_from_representation_tree(tree: RepresentationTree) -> Pencil:
    """det(A + xB + yC) equals the polynomial the tree represents."""
    m = len(tree)
    A = np.zeros((m, m), dtype=complex)
    B = np.zeros((m, m), dtype=complex)
    C = np.zeros((m, m), dtype=complex)
    for i, f in enumerate(tree.coeffs):
        A[0, i] += f.a
        B[0, i] += f.b
        C[0, i] += f.c
    for i in range(1, m):
        A[i, i] = 1.0
        p, e = tree.parents[i], tree.edges[i]
        A[i, p] -= e.a
        B[i, p] -= e.b
        C[i, p] -= e.c
    return Pencil(size=m, block_size=1, A=A, B=B, C=C)


# -- construction ----------------------------------------------------------------


def _coeff_at(p: BivariatePolynomial, j: int, k: int) -> complex:
    if j <= p.degree and k <= p.degree - j:
        return complex(p.coeffs[j, k])
    return 0.0 + 0.0j


def _top_slice(p: BivariatePolynomial) -> np.ndarray:
    """Coefficients of the univariate polynomial whose zeros steer the main
    branch: entry i multiplies t**i and equals the x^i y^(n-i) coefficient."""
    n = p.degree
    return np.array([p.coeffs[i, n - i] for i in range(n + 1)], dtype=complex)


def _pick_rotation(p: BivariatePolynomial) -> complex:
    """gamma making the x^n coefficient of p(x, y + gamma x) largest among a
    few small candidates."""
    top = _top_slice(p)
    # substituted x^n coefficient is sum_i top[n-i] gamma^i, i.e. polyval
    # of the low-first slice read as a high-first coefficient list
    best, best_val = None, -1.0
    for gamma in (1.0, -1.0, 2.0, -2.0, 0.5, -0.5, 3.0, -3.0):
        val = abs(np.polyval(top, gamma))
        if val > best_val:
            best, best_val = gamma, val
    if best_val <= DEGREE_TRIM_REL * p.coeff_norm():  # pragma: no cover
        raise DegenerateInputError("cannot make the leading x-coefficient nonzero")
    return best


def _simple_roots(roots: np.ndarray) -> list[complex]:
    # a numerical m-fold root splits into a cluster of diameter about
    # eps**(1/m) (6e-6 for a triple root), so the separation threshold must
    # sit well above that; near-coincident roots would blow up the shift
    # parameter anyway and are better served by the fallback construction
    out = []
    for i, r in enumerate(roots):
        sep = min(
            (abs(r - other) for j, other in enumerate(roots) if j != i),
            default=np.inf,
        )
        if sep > 1e-4 * (1.0 + abs(r)):
            out.append(complex(r))
    return out


def _choose_shift(work, h_low_to_high, shear_maker, target):
    """Substitution root and shift with the smallest scale amplification.

    Every simple root of the steering polynomial is tried; the blow-up of
    the substituted coefficients grows like max(1, |s|, |t|)**degree, so
    the candidate minimizing that factor wins.  A near-real candidate
    within a factor two of the best keeps real inputs on real shifts.
    Returns (root, shift) or None when no candidate works.
    """
    roots = univariate_roots(h_low_to_high)
    deriv = np.polyder(np.asarray(h_low_to_high, dtype=complex)[::-1])
    candidates = []
    for s in _simple_roots(roots):
        t = _vanishing_parameter(work, lambda tt: shear_maker(s, tt), target)
        if t is None:
            continue
        amp = max(1.0, abs(s), abs(t))
        candidates.append((amp, -abs(np.polyval(deriv, s)), s, t))
    if not candidates:
        return None
    candidates.sort(key=lambda c: (c[0], c[1], c[2].real, c[2].imag))
    best_amp = candidates[0][0]
    for amp, _, s, t in candidates:
        if abs(s.imag) <= 1e-10 * (1.0 + abs(s)) and amp <= 2.0 * best_amp:
            return s, t
    return candidates[0][2], candidates[0][3]


def _vanishing_parameter(p: BivariatePolynomial, make_sub, target: tuple):
    """Parameter value killing a coefficient that depends on it linearly.

    One correction pass against the actually substituted polynomial keeps
    the residual coefficient at the roundoff of a single substitution even
    when the shift amplifies the coefficient scale.
    """
    j, k = target
    c0 = _coeff_at(p.substitute(make_sub(0.0)), j, k)
    c1 = _coeff_at(p.substitute(make_sub(1.0)), j, k)
    slope = c1 - c0
    if abs(slope) <= 1e-13 * max(1.0, p.coeff_norm()):
        if abs(c0) <= VANISH_TOL * max(1.0, p.coeff_norm()):
            return 0.0 + 0.0j
        return None
    value = -c0 / slope
    if abs(value) > 1e8 * max(1.0, p.coeff_norm()):
        return None
    residual = _coeff_at(p.substitute(make_sub(value)), j, k)
    value = value - residual / slope
    return value


def _main_branch_tree(p: BivariatePolynomial, allow_special: bool) -> RepresentationTree:
    """Plain recursive construction; the leading x-coefficient is nonzero."""
    n = p.degree
    c = p.coeffs
    if n == 1:
        return RepresentationTree(
            (None,), (None,), (LinearForm(c[0, 0], c[1, 0], c[0, 1]),)
        )

    zeros = univariate_roots(_top_slice(p))
    parents = [None] + [i for i in range(n - 1)]
    edges: list = [None] + [LinearForm(0.0, 1.0, -zeros[k]) for k in range(n - 1)]

    node_polys = [BivariatePolynomial([[1.0]])]
    for k in range(n - 1):
        node_polys.append(node_polys[-1] * edges[k + 1].as_polynomial())

    coeffs = [LinearForm(c[0, 0], c[1, 0], c[0, 1])]
    for k in range(2, n):
        beta = complex(node_polys[k - 1].coeffs[k - 2, 1])
        coeffs.append(LinearForm(0.0, c[k, 0], c[k - 1, 1] - c[k, 0] * beta))
    coeffs.append(LinearForm(0.0, c[n, 0], -c[n, 0] * zeros[n - 1]))

    remainder = p
    for f, q in zip(coeffs, node_polys):
        if not f.is_zero:
            remainder = remainder - f.as_polynomial() * q

    scale = max(p.coeff_norm(), 1.0)
    table = remainder.coeffs.copy()
    low = np.abs(table[:, :2]).max() if table.shape[1] >= 1 else 0.0
    if low > REMAINDER_TOL * scale:  # pragma: no cover - algebraic identity
        raise DegenerateInputError("remainder unexpectedly involves y^0 or y^1 terms")
    # roundoff leftovers must not masquerade as remainder terms: judge
    # against the scale of the parent polynomial, not of the remainder
    table[np.abs(table) <= REMAINDER_CLEAN * scale] = 0.0
    if table.shape[1] >= 2:
        table[:, :2] = 0.0
    s = BivariatePolynomial(table).divide_y_power(2)

    if s.is_zero:
        return RepresentationTree(tuple(parents), tuple(edges), tuple(coeffs))

    bridge = len(parents)
    parents.append(0)
    edges.append(LinearForm(0.0, 0.0, 1.0))
    if s.degree == 0:
        coeffs.append(LinearForm(0.0, 0.0, s.coeffs[0, 0]))
        return RepresentationTree(tuple(parents), tuple(edges), tuple(coeffs))
    coeffs.append(LinearForm())

    sub = _build(s, allow_special)
    offset = bridge + 1
    for i in range(len(sub)):
        if i == 0:
            parents.append(bridge)
            edges.append(LinearForm(0.0, 0.0, 1.0))
        else:
            parents.append(sub.parents[i] + offset)
            edges.append(sub.edges[i])
        coeffs.append(sub.coeffs[i])
    return RepresentationTree(
        tuple(parents), tuple(edges), tuple(coeffs), sub.substitution_steps
    )


def _cubic_special_tree(p: BivariatePolynomial):
    """Size-3 tree for a cubic after x = x' + s y' + t, or None when the
    steering polynomial has no usable simple root."""
    steps = []
    work = p
    if abs(_coeff_at(work, 3, 0)) <= DEGREE_TRIM_REL * work.coeff_norm():
        gamma = _pick_rotation(work)
        rot = AffineSubstitution.rotate_y(gamma)
        work = work.substitute(rot)
        steps.append(SubstitutionStep("rotate_y", rot, {"gamma": gamma}))

    h = [_coeff_at(work, 0, 3), _coeff_at(work, 1, 2), _coeff_at(work, 2, 1), _coeff_at(work, 3, 0)]
    chosen = _choose_shift(work, h, AffineSubstitution.shear_x, (0, 2))
    if chosen is None:
        return None
    s, t = chosen
    shear = AffineSubstitution.shear_x(s, t)
    tilde = work.substitute(shear)
    steps.append(SubstitutionStep("shear_x", shear, {"s": s, "t": t}))

    scale = max(p.coeff_norm(), 1.0)
    if tilde.degree != 3:
        return None
    if max(abs(_coeff_at(tilde, 0, 3)), abs(_coeff_at(tilde, 0, 2))) > VANISH_TOL * scale:
        return None

    quad = [_coeff_at(tilde, 1, 2), _coeff_at(tilde, 2, 1), _coeff_at(tilde, 3, 0)]
    try:
        z2, z3 = univariate_roots(quad)
    except LeadingCoefficientError:
        return None
    c = tilde.coeffs
    tree = RepresentationTree(
        (None, 0, 1),
        (None, LinearForm(0.0, 1.0, 0.0), LinearForm(0.0, 1.0, -z2)),
        (
            LinearForm(c[0, 0], c[1, 0], c[0, 1]),
            LinearForm(0.0, c[2, 0], c[1, 1]),
            LinearForm(0.0, c[3, 0], -c[3, 0] * z3),
        ),
    )
    total = AffineSubstitution.identity()
    for step in steps:
        total = total.compose(step.map)
    return tree.compose(total.inverse()).with_steps(tuple(steps))


def _quartic_special_tree(p: BivariatePolynomial):
    """Size-5 tree for a quartic after two shears, or None when either
    steering polynomial lacks a usable simple root."""
    steps = []
    work = p
    if abs(_coeff_at(work, 4, 0)) <= DEGREE_TRIM_REL * work.coeff_norm():
        gamma = _pick_rotation(work)
        rot = AffineSubstitution.rotate_y(gamma)
        work = work.substitute(rot)
        steps.append(SubstitutionStep("rotate_y", rot, {"gamma": gamma}))

    h = [
        _coeff_at(work, 0, 4),
        _coeff_at(work, 1, 3),
        _coeff_at(work, 2, 2),
        _coeff_at(work, 3, 1),
        _coeff_at(work, 4, 0),
    ]
    chosen = _choose_shift(work, h, AffineSubstitution.shear_x, (0, 3))
    if chosen is None:
        return None
    s, t = chosen
    shear1 = AffineSubstitution.shear_x(s, t)
    tilde = work.substitute(shear1)
    steps.append(SubstitutionStep("shear_x", shear1, {"s": s, "t": t}))

    scale = max(p.coeff_norm(), 1.0)
    if tilde.degree != 4:
        return None
    if max(abs(_coeff_at(tilde, 0, 4)), abs(_coeff_at(tilde, 0, 3))) > VANISH_TOL * scale:
        return None

    g = np.array(
        [
            _coeff_at(tilde, 4, 0),
            _coeff_at(tilde, 3, 1),
            _coeff_at(tilde, 2, 2),
            _coeff_at(tilde, 1, 3),
        ],
        dtype=complex,
    )
    g_scale = max(np.abs(g).max(), DEGREE_TRIM_REL * scale)
    trimmed = g.copy()
    while trimmed.size > 1 and abs(trimmed[-1]) <= DEGREE_TRIM_REL * g_scale:
        trimmed = trimmed[:-1]
    if trimmed.size == 1:
        if abs(trimmed[0]) > DEGREE_TRIM_REL * scale:
            return None  # constant nonzero x^4 coefficient: no shear kills it
        u = 0.0 + 0.0j
        v = _vanishing_parameter(tilde, lambda vv: AffineSubstitution.shear_y(u, vv), (3, 0))
        if v is None:
            return None
    else:
        chosen = _choose_shift(tilde, trimmed, AffineSubstitution.shear_y, (3, 0))
        if chosen is None:
            return None
        u, v = chosen
    shear2 = AffineSubstitution.shear_y(u, v)
    hat = tilde.substitute(shear2)
    steps.append(SubstitutionStep("shear_y", shear2, {"u": u, "v": v}))

    if hat.degree != 4:
        return None
    killed = (
        abs(_coeff_at(hat, 3, 0)),
        abs(_coeff_at(hat, 4, 0)),
        abs(_coeff_at(hat, 0, 3)),
        abs(_coeff_at(hat, 0, 4)),
    )
    if max(killed) > VANISH_TOL * scale:
        return None

    a31 = _coeff_at(hat, 3, 1)
    a22 = _coeff_at(hat, 2, 2)
    a13 = _coeff_at(hat, 1, 3)
    if abs(a31) > DEGREE_TRIM_REL * scale:
        try:
            z1, z2 = univariate_roots([a13, a22, a31])
        except LeadingCoefficientError:
            return None
        top_edge = LinearForm(0.0, 1.0, -z1)
        top_coeff = LinearForm(0.0, a31, -a31 * z2)
    else:
        # quartic band reduces to x y^2 (a22 x + a13 y): climb with a y-edge
        top_edge = LinearForm(0.0, 0.0, 1.0)
        top_coeff = LinearForm(0.0, a22, a13)

    c = hat.coeffs
    tree = RepresentationTree(
        (None, 0, 0, 1, 3),
        (
            None,
            LinearForm(0.0, 1.0, 0.0),
            LinearForm(0.0, 0.0, 1.0),
            LinearForm(0.0, 0.0, 1.0),
            top_edge,
        ),
        (
            LinearForm(c[0, 0], c[1, 0], c[0, 1]),
            LinearForm(0.0, c[2, 0], c[1, 1]),
            LinearForm(0.0, 0.0, c[0, 2]),
            LinearForm(0.0, c[2, 1], c[1, 2]),
            top_coeff,
        ),
    )
    total = AffineSubstitution.identity()
    for step in steps:
        total = total.compose(step.map)
    return tree.compose(total.inverse()).with_steps(tuple(steps))


def _build(p: BivariatePolynomial, allow_special: bool) -> RepresentationTree:
    n = p.degree
    if n < 1 or p.is_zero:
        raise DegenerateInputError("need a nonzero polynomial of degree at least 1")
    if allow_special and n == 3:
        tree = _cubic_special_tree(p)
        if tree is not None:
            return tree
    if allow_special and n == 4:
        tree = _quartic_special_tree(p)
        if tree is not None:
            return tree
    if abs(p.coeffs[n, 0]) <= DEGREE_TRIM_REL * p.coeff_norm():
        gamma = _pick_rotation(p)
        rot = AffineSubstitution.rotate_y(gamma)
        inner = _build(p.substitute(rot), allow_special)
        step = SubstitutionStep("rotate_y", rot, {"gamma": gamma})
        return inner.compose(rot.inverse()).with_steps((step,) + inner.substitution_steps)
    return _main_branch_tree(p, allow_special)


# -- public operation surface ------------------------------------------------------


def build_tree(p: BivariatePolynomial) -> RepresentationTree:
    """Plain recursive representation tree (no special-case size savings)."""
    return _build(p, allow_special=False)


def build_linearization_tree(
    p: BivariatePolynomial, use_special_cases: bool = True
) -> RepresentationTree:
    """Representation tree with the degree-3/4 node savings switched on."""
    return _build(p, allow_special=use_special_cases)


def special_case_cubic(p: BivariatePolynomial) -> tuple[Pencil, AffineSubstitution]:
    """3x3 pencil for a cubic; falls back to the 4-node tree when the
    steering polynomial has a triple root."""
    if p.degree != 3:
        raise ValueError("expected a polynomial of degree exactly 3")
    tree = _cubic_special_tree(p)
    if tree is None:
        tree = _build(p, allow_special=False)
    return assemble_pencil_from_representation_tree(tree), tree.composed_substitution()


def special_case_quartic(p: BivariatePolynomial) -> tuple[Pencil, AffineSubstitution]:
    """5x5 pencil for a quartic; falls back to the 6-node tree when either
    steering polynomial lacks a simple root."""
    if p.degree != 4:
        raise ValueError("expected a polynomial of degree exactly 4")
    tree = _quartic_special_tree(p)
    if tree is None:
        tree = _build(p, allow_special=False)
    return assemble_pencil_from_representation_tree(tree), tree.composed_substitution()


def linearize(p: BivariatePolynomial, use_special_cases: bool = True) -> Pencil:
    """Pencil with det(A + xB + yC) = p(x, y), using the smallest available
    construction for the degree."""
    return assemble_pencil_from_representation_tree(
        build_linearization_tree(p, use_special_cases=use_special_cases)
    )
