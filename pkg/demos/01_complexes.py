"""Ordinary complexes seen as representations of the linear quiver with d;d = 0.

Run with ``python3 demos/01_complexes.py``.  Each block prints what it
computes so the output reads top to bottom.
"""

from qshape import QQ, QuiverSpec, build_category, cohom, hom_tor, make_rep, stalk_rep, validate_setup
from qshape.homology import ch_oracle

# %% the category and its setup check
cat = build_category(QuiverSpec.linear(), (-8, 8), QQ)
report = validate_setup(cat)
print("setup admissible:", report.all_pass)
print("Serre functor on the core:", {q: report.serre_data.object_map[q] for q in range(-1, 2)})

# %% a complex 0 -> Q^2 -> Q^2 -> Q -> 0 in degrees 2, 1, 0
# d2 has rank 1 and d1 is onto, so only degree 2 carries homology
X = make_rep(cat, {2: 2, 1: 2, 0: 1}, {"d2": [[1, 0], [0, 0]], "d1": [[0, 1]]})
print("dimension vector:", X.dim_vector())

# %% cohomology in the q-shaped sense agrees with classical homology, shifted
for i in (1, 2, 3):
    row = [cohom(q, i, X).dim for q in range(-1, 5)]
    print(f"H^{i}_[q] for q = -1..4:", row)
print("classical homology by degree:", {j: ch_oracle(X, j) for j in range(0, 3)})

# %% the Tor-flavoured version lives on the other side
for i in (1, 2):
    print(f"H_{i}^[q] for q = -2..3:", [hom_tor(q, i, X).dim for q in range(-2, 4)])

# %% a stalk is far from exact
s = stalk_rep(cat, 0)
print("stalk at 0, H^1 at q = 1:", cohom(1, 1, s).dim)
