"""Exact heart fans, cofans and stability data for finite abelian category models."""
from __future__ import annotations

from .category import CategoryModel, Subcat, TorsionPair, load_dataset, load_model, torsion_pairs
from .cones import IntCone, RatCone, localize, min_face
from .errors import HeartfanError
from .families import FamilySpec, family_fan
from .fans import Cofan, Fan, associated_fan, check_fan, dual_face_fan, generate_cofan, support_query
from .hearts import (
    distinguished_kernel_pair,
    heart_cofan,
    heart_fan,
    hearts_containing,
    phase_slice,
    stability_fan,
    tilt,
    virtual_gfan,
    walls_and_chambers,
)
from .io import fan_document, parse, serialize
from .render import render_svg

__all__ = [
    "CategoryModel",
    "Cofan",
    "Fan",
    "FamilySpec",
    "HeartfanError",
    "IntCone",
    "RatCone",
    "Subcat",
    "TorsionPair",
    "associated_fan",
    "check_fan",
    "distinguished_kernel_pair",
    "dual_face_fan",
    "family_fan",
    "fan_document",
    "generate_cofan",
    "heart_cofan",
    "heart_fan",
    "hearts_containing",
    "load_dataset",
    "load_model",
    "localize",
    "min_face",
    "parse",
    "phase_slice",
    "render_svg",
    "serialize",
    "stability_fan",
    "support_query",
    "tilt",
    "torsion_pairs",
    "virtual_gfan",
    "walls_and_chambers",
]
