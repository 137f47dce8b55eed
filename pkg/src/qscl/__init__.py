"""Exact stable commutator length in free groups and their rational completions."""

from .chains import Chain, HChain, NotABoundaryError, is_boundary, normalize, parse_chain
from .completions import (
    FragmentElement,
    RationalExtension,
    RationalSubgroup,
    scl_extension_split,
    scl_fragment,
    scl_surface,
    surface_group,
)
from .quasimorphisms import CountingQM, bavard_lower_bound, defect_bound
from .scl_free import cl_upper_bound, scl, scl_certificate, verify_certificate
from .words import CyclicWord, Word, parse_word

__version__ = "0.1.0"
