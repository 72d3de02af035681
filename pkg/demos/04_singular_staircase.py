"""
Inside the singular case: staircase compression
===============================================

Whenever a pencil is larger than the polynomial's degree, the coupled
two-parameter problem is singular: the operator determinant delta0 has a
nontrivial null space, and the finite eigenvalues hide in a smaller
regular block.  This script walks a degree-3 system through the SVD-based
compression that peels the singular structure away.
"""
import numpy as np

from detrep import (
    BivariatePolynomial,
    TwoParameterProblem,
    assemble_pencil_from_monomial_tree,
    extract_regular_part,
    generic_tree,
    operator_determinants,
    solve_regular,
)

rng = np.random.default_rng(3)


def random_cubic():
    table = np.zeros((4, 4))
    for j in range(4):
        for k in range(4 - j):
            table[j, k] = rng.uniform(0, 1)
    return BivariatePolynomial(table)


p, q = random_cubic(), random_cubic()
tree = generic_tree(3)
problem = TwoParameterProblem.from_pencils(
    assemble_pencil_from_monomial_tree(p, tree),
    assemble_pencil_from_monomial_tree(q, tree),
)

##############################################################################
# The pencils are 5 x 5 for a degree-3 polynomial, so the deltas are 25 x 25
# while the system has only 9 roots: delta0 must be singular.

deltas = operator_determinants(problem)
sv = np.linalg.svd(deltas.delta0, compute_uv=False)
print(f"delta matrices: {deltas.shape[0]} x {deltas.shape[1]}")
print(f"singular values of delta0 range {sv[0]:.2e} .. {sv[-1]:.2e}")
print(f"numerical rank: {int(np.sum(sv > 1e-10 * sv[0]))}")

##############################################################################
# Each compression step splits off the null directions of the current
# delta0 block and keeps the rows that annihilate the matching columns of
# delta1 and delta2.  The sizes shrink until a regular square block is left.

reduced, log = extract_regular_part(deltas)
print("\ncompression steps:")
for step in log.steps:
    print(f"   {step.kind:>8} step on a {step.shape[0]}x{step.shape[1]} block: "
          f"rank {step.rank}, kept sigma {step.kept_sv:.2e}, dropped {step.dropped_sv:.2e}")
print(f"regular part: {reduced.shape[0]} x {reduced.shape[1]}")

##############################################################################
# The accumulated transformations are isometries, so the reduced block is
# an exact two-sided compression of the original triple.

gram_left = log.left.conj().T @ log.left
gram_right = log.right.conj().T @ log.right
print(f"left/right transform orthonormality defects: "
      f"{np.abs(gram_left - np.eye(gram_left.shape[0])).max():.1e}, "
      f"{np.abs(gram_right - np.eye(gram_right.shape[0])).max():.1e}")

##############################################################################
# Nine eigenvalue pairs remain, and each annihilates both polynomials.

solutions = solve_regular(reduced)
print(f"\n{len(solutions)} eigenvalue pairs on the regular part:")
for s in solutions:
    print(f"   x = {s.x:+.6f}   y = {s.y:+.6f}   "
          f"|p| = {abs(p(s.x, s.y)):.1e}   |q| = {abs(q(s.x, s.y)):.1e}")
