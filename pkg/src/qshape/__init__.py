"""Homological algebra of representations of locally bounded k-linear categories.

The submodules split the work as follows: ``exactlin`` holds fields and exact
matrices, ``category`` builds windowed categories and checks the setup,
``rep`` has representations and their morphisms, ``homology`` computes the
derived invariants, ``stable`` handles the Frobenius pair and its stable
category, and ``cli`` with ``dsl`` drive everything from workspace files.
"""

from .category import QuiverSpec, WindowError, build_category, validate_setup
from .exactlin import GF, QQ, Matrix
from .homology import cohom, ext_qa, hom_tor, is_exact, is_weq
from .rep import (
    Representation,
    dual_numbers,
    field_algebra,
    hom_space,
    induced_rep,
    make_morphism,
    make_rep,
    stalk_rep,
)
from .stable import (
    classify_morphism,
    cone,
    dq_hom,
    semiproj_resolution,
    stable_hom,
    stably_isomorphic,
    suspend,
)

__all__ = [
    "GF",
    "QQ",
    "Matrix",
    "QuiverSpec",
    "Representation",
    "WindowError",
    "build_category",
    "classify_morphism",
    "cohom",
    "cone",
    "dq_hom",
    "dual_numbers",
    "ext_qa",
    "field_algebra",
    "hom_space",
    "hom_tor",
    "induced_rep",
    "is_exact",
    "is_weq",
    "make_morphism",
    "make_rep",
    "semiproj_resolution",
    "stable_hom",
    "stably_isomorphic",
    "stalk_rep",
    "suspend",
    "validate_setup",
]
