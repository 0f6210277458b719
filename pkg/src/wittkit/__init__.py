"""wittkit: exact computer algebra for truncated Witt vectors and friends.

Submodules
----------
rings      prime fields, Z/p^n residues, sparse Laurent polynomials
witt       truncated p-typical Witt vectors, w-tilde, Teichmuller expansions
weyl       the crystalline Weyl algebra of divided-power operators
wittdiff   Witt differential operators and their structure relations
drw        the de Rham-Witt complex of affine space (symbolic basis)
cech       cohomology of Witt line bundles on projective space
localcoh   local cohomology classes, the generation algorithm
steinberg  parabolic-induction complexes and Steinberg ranks
cli        the `wittkit` command-line interface
"""

__version__ = "0.1.0"
