"""Hodge numbers and motives of Calabi-Yau varieties built from curves with cyclic actions."""

from .characters import RelationSubgroup, make_relation_subgroup
from .curves import CurveAction, builtin_curve
from .motives import HodgeDiamond, LefschetzSum, MotiveExpr, TranscendentalBlock, block_hodge
from .pipeline import ConstructionSpec, EquivariantVariety, build, star_certificate

__all__ = [
    "ConstructionSpec",
    "CurveAction",
    "EquivariantVariety",
    "HodgeDiamond",
    "LefschetzSum",
    "MotiveExpr",
    "RelationSubgroup",
    "TranscendentalBlock",
    "block_hodge",
    "build",
    "builtin_curve",
    "make_relation_subgroup",
    "star_certificate",
]
