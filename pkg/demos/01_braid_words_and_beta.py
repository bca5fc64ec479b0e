#!/usr/bin/env python3
"""Braid words, homogeneity, and the inhomogeneity count beta.

beta adds, for every generator, the number of cyclic sign changes of its
occurrences, plus 2 for each generator that never occurs.  It vanishes
exactly on homogeneous words, and min over generator schemes bounds the
Morse-Novikov number of the closure from above.  The classic 5-strand
example below has beta = 4 in Artin generators but is homogeneous with
respect to a tree's band generators, so the tree scheme certifies that its
closure is fibered.
"""

import numpy as np

from braidfib import (BraidWord, PlaneTree, beta, closure_components,
                      format_word, is_homogeneous, mn_upper_bound,
                      permutation_of, tree_edge_to_band)

w52 = BraidWord.from_ints(3, [1, 2, 2, 2, 1, -2])
print("the 5_2 word:", format_word(w52).strip())
print("  permutation:", permutation_of(w52).images,
      "| closure components:", closure_components(w52))
print("  homogeneous:", is_homogeneous(w52), "| beta:", beta(w52))
print("  => MN(closure) <= ", mn_upper_bound([w52]), " (attained: MN(5_2) = 2)")

print()
w13 = BraidWord.from_ints(5, [-2, 4, -2, -3, 1, -2, -1, -2, 4, -3, 1, -2, -1])
print("13-letter word on 5 strands:", format_word(w13).splitlines()[1])
print("  sign pattern of s1 reads (+,-,+,-): three changes plus the cyclic one")
print("  beta =", beta(w13))

# the same braid is homogeneous over the edge generators of this tree:
# s1 s2^-1 s1^-1 is a single band twist of strands 1 and 3
tree = PlaneTree(
    positions=tuple(np.exp(1j * (0.2 + 2 * np.pi * k / 5)) for k in range(5)),
    edges=((1, 3, -1), (2, 3, -1), (3, 4, -1), (4, 5, 1)),
)
wt = BraidWord(5, ((2, -1), (4, 1), (2, -1), (3, -1), (1, -1),
                   (2, -1), (4, 1), (3, -1), (1, -1)), scheme="tree", tree=tree)
print("  tree-generator word: beta_T =", beta(wt),
      "| same permutation:", permutation_of(wt).images == permutation_of(w13).images)
print("  min over the two schemes:", mn_upper_bound([w13, wt]),
      " (the closure is fibered)")

pairs, meta = tree_edge_to_band(tree)
print("  tree edges as band generators:", pairs)
print("  labelling:", meta["convention"])
