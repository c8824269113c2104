"""Exact arithmetic for finite measured groupoids, treeings, and treed HNN quotients."""

from .core import (ArrowSet, FiniteGroupoid, InputError, ResourceBoundError,
                   UnitSpace, Violation, bisection_product, cyclic_group_groupoid,
                   disjoint_union, equivalence_groupoid, frac, frac_str,
                   group_groupoid, is_pmp, mu_r, mu_s, pair_groupoid,
                   radon_nikodym, restrict, saturate, uniform_units,
                   unit_section, validate_groupoid)
from .actions import (FiniteGroupAction, TranslationGroupoid, cyclic_action,
                      translation_groupoid)

__all__ = [
    "ArrowSet", "FiniteGroupoid", "FiniteGroupAction", "InputError",
    "ResourceBoundError", "TranslationGroupoid", "UnitSpace", "Violation",
    "bisection_product", "cyclic_action", "cyclic_group_groupoid",
    "disjoint_union", "equivalence_groupoid", "frac", "frac_str",
    "group_groupoid", "is_pmp", "mu_r", "mu_s", "pair_groupoid",
    "radon_nikodym", "restrict", "saturate", "translation_groupoid",
    "uniform_units", "unit_section", "validate_groupoid",
]
