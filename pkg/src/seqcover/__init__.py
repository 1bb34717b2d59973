"""Perfect sequence covering arrays from projective linear groups."""

from .ascstats import (
    AlmostPerfectResult,
    AscentSums,
    LabeledLineSet,
    SequenceClass,
    ascent_sums,
    census,
    classify,
    coverage_histogram_thm2,
    lineset_from_geometry,
)
from .errors import ResourceGuardError
from .gf import FieldElement, FieldError, FieldSpec, gf_build, gf_field
from .grp import GroupRep, enumerate_pgl, orbit_asc_stab, pgl_order
from .projgeom import Geometry, ProjPoint, build_geometry, is_arc, is_frame
from .psca import (
    CoverageReport,
    NotPerfectError,
    PermutationMultiset,
    construct_psca,
    coverage_report,
    delete_symbols,
    g_upper_bound,
    read_psca,
    verify_psca,
    write_psca,
)
from .singer import DifferenceSet, labeling_from_singer, singer_difference_set, validate_difference_set

__version__ = "0.1.0"

__all__ = [
    "AlmostPerfectResult",
    "AscentSums",
    "CoverageReport",
    "DifferenceSet",
    "FieldElement",
    "FieldError",
    "FieldSpec",
    "Geometry",
    "GroupRep",
    "LabeledLineSet",
    "NotPerfectError",
    "PermutationMultiset",
    "ProjPoint",
    "ResourceGuardError",
    "SequenceClass",
    "ascent_sums",
    "build_geometry",
    "census",
    "classify",
    "construct_psca",
    "coverage_histogram_thm2",
    "coverage_report",
    "delete_symbols",
    "enumerate_pgl",
    "g_upper_bound",
    "gf_build",
    "gf_field",
    "is_arc",
    "is_frame",
    "labeling_from_singer",
    "lineset_from_geometry",
    "orbit_asc_stab",
    "pgl_order",
    "read_psca",
    "singer_difference_set",
    "validate_difference_set",
    "verify_psca",
    "write_psca",
]
