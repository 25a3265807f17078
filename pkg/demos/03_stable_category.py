"""The stable category of a Frobenius pair, made concrete.

Suspension over a cyclic quiver is periodic.  Over the dual numbers the
simple stalk has a semiprojective resolution that never stops growing, yet
its derived endomorphisms are still computable.  Finally, the cone of an
identity vanishes stably.
"""

from qshape import (
    QQ, QuiverSpec, build_category, cone, dq_hom, dual_numbers, hom_space, stable_hom,
    stably_isomorphic, stalk_rep,
)
from qshape.rep import amodule, free_rep, identity, point_category
from qshape.stable import certify_semiprojective, semiproj_resolution, suspension_power

# %% periodicity: over cyclic(3) with d;d = 0 the stalk comes back, here after m steps
cyc = build_category(QuiverSpec.cyclic(3), None, QQ)
s = stalk_rep(cyc, 0)
for k in (1, 2, 3, 6):
    Sk = suspension_power(s, k)
    iso = stably_isomorphic(Sk, s)
    print(f"suspension^{k} of the stalk: dims {Sk.dim_vector()}, stably the stalk again: {bool(iso)}")

# %% complexes of k[x]/x^2-modules
cat = build_category(QuiverSpec.linear(), (-8, 8), QQ)
A = dual_numbers(QQ)
simple = stalk_rep(cat, 0, amodule(A, {"*": 1}))
res = semiproj_resolution(simple)
print("resolution of the simple stalk: certified", bool(res.certificate),
      "cut at", res.truncated_at, "dims", res.P.dim_vector())

# %% the identity survives in the derived category even though the stalk is
# not semiprojective: Hom and the derived Hom happen to agree here
print("Hom(s, s):", hom_space(simple, simple).dim, " derived Hom(s, s):", dq_hom(simple, simple).dim)

# %% cones: the stalk with value A is semiprojective but not projective, and
# the cone of its identity still vanishes stably
free = free_rep(point_category(QQ), A, [("*", "*")])
P = stalk_rep(cat, 0, free)
print("stalk of A certified semiprojective:", bool(certify_semiprojective(P)))
print("stable endomorphisms of the stalk of A:", stable_hom(P, P).dim)
tri = cone(identity(P))
print("cone(id) dims:", tri.C.dim_vector())
print("stable endomorphisms of cone(id):", stable_hom(tri.C, tri.C).dim)
