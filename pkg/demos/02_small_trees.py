"""
How small can the pencil be?
============================

Pencil sizes grow quadratically with the degree, but the constants matter:
the monomial-tree construction needs about n^2/4 rows, the recursive
representation tree about n^2/6, and sparse polynomials get away with far
fewer nodes when the tree is chosen per polynomial.
"""
import numpy as np

from detrep import (
    BivariatePolynomial,
    assemble_pencil_from_monomial_tree,
    generic_tree_size,
    linearize,
    representation_tree_size,
    sparse_tree_heuristic,
)

##############################################################################
# Size tables.  The delta matrices of the coupled eigenvalue problem are the
# square of the pencil size, so every saved row pays off six-fold later.

rng = np.random.default_rng(0)
print(f"{'degree':>7} {'tree':>6} {'recursive':>10} {'special':>8} "
      f"{'delta tree':>11} {'delta special':>14}")
for n in range(3, 11):
    table = np.zeros((n + 1, n + 1))
    for j in range(n + 1):
        for k in range(n + 1 - j):
            table[j, k] = rng.uniform(0.1, 1.0)
    p = BivariatePolynomial(table)
    dispatched = linearize(p).size
    print(f"{n:>7} {generic_tree_size(n):>6} {representation_tree_size(n):>10} "
          f"{dispatched:>8} {generic_tree_size(n)**2:>11} {dispatched**2:>14}")

##############################################################################
# A sparse degree-6 polynomial.  The dense tree would use 15 nodes; an
# exact directed-Steiner search connects the nine terms with 11.

sparse = BivariatePolynomial.from_terms({
    (0, 0): 1, (1, 0): 1, (0, 1): 1, (0, 3): 1, (2, 2): 1,
    (4, 1): 1, (1, 4): 1, (6, 0): 1, (2, 4): 1,
})
tree = sparse_tree_heuristic(sparse)
print("\nsparse degree-6 polynomial with 9 terms")
print("tree nodes:", [f"x^{j}y^{k}" for j, k in tree.nodes])
print(f"{len(tree)} nodes instead of the dense {generic_tree_size(6)}")

pencil = assemble_pencil_from_monomial_tree(sparse, tree)
nonzero = int(np.count_nonzero(np.abs(pencil.A) + np.abs(pencil.B) + np.abs(pencil.C)))
print(f"pencil holds only {nonzero} structural entries in a {pencil.dim}x{pencil.dim} matrix")

##############################################################################
# Two long chains: x^9 + y^9 - 1 needs nothing between the pure powers.

chains = BivariatePolynomial.from_terms({(9, 0): 1, (0, 9): 1, (0, 0): -1})
tree = sparse_tree_heuristic(chains)
print(f"\nx^9 + y^9 - 1: {len(tree)} nodes versus the dense {generic_tree_size(9)}")

##############################################################################
# The recursive construction degenerates gracefully too: for the same
# two-chain polynomial the main branch already absorbs everything and the
# pencil is 9 x 9, the smallest possible size for degree 9.

print(f"recursive pencil size for x^9 + y^9 - 1: {linearize(chains).size}")
