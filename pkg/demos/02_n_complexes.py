"""N-complexes: d^N = 0 but shorter composites may survive.

The q-shaped invariants split into the amplitude homologies
ker(d^r) / im(d^(N-r)).  This walks through one 3-complex by hand.
"""

import random

from qshape import GF, QuiverSpec, build_category, cohom, hom_tor
from qshape.generate import random_linear_rep
from qshape.homology import nch_cohom_formula, nch_oracle

F5 = GF(5)
cat = build_category(QuiverSpec.nlinear(3), (-14, 14), F5)
print("nilpotency degree:", cat.nilpotency_degree)

# %% a random 3-complex supported in degrees -2..2
X = random_linear_rep(cat, random.Random(7), -2, 2, 3)
print("dimension vector:", X.dim_vector())

# %% amplitude homology computed directly
for r in (1, 2):
    print(f"amplitude {r} homology by degree:", {q: nch_oracle(X, r, q) for q in range(-2, 3)})

# %% the derived invariants, next to the closed form they should match
for i in (1, 2, 3):
    got = [cohom(q, i, X).dim for q in range(-2, 7)]
    want = [nch_cohom_formula(X, q, i) for q in range(-2, 7)]
    print(f"H^{i}_[q], q = -2..6:", got, "matches" if got == want else f"expected {want}")

# %% the Tor side needs the same window, no more
print("H_1^[q], q = -6..2:", [hom_tor(q, 1, X).dim for q in range(-6, 3)])
