"""Exact small-scale toolkit for transversal, sequencing and zero-sum problems
in finite groups."""

from .group_core import (
    Group,
    Subgroup,
    abelianization,
    commutator_subgroup,
    from_cayley_table,
    hall_paige_product,
    hall_paige_sylow,
    make_family,
)

__all__ = [
    "Group",
    "Subgroup",
    "abelianization",
    "commutator_subgroup",
    "from_cayley_table",
    "hall_paige_product",
    "hall_paige_sylow",
    "make_family",
]

__version__ = "0.1.0"
