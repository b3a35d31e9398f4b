"""Isoperimetric spectra and related computations for finitely generated groups."""
from .words import Alphabet, Word, build_word, cyclic_reduce, format_word, free_reduce
from .presentations import Presentation, GradedPresentation, parse_presentation, triangulate, enumerate_null_words
from .filling import Derivation, SearchCaps, area_search, spectrum_table, verify_derivation

__all__ = [
    "Alphabet", "Word", "build_word", "cyclic_reduce", "format_word", "free_reduce",
    "Presentation", "GradedPresentation", "parse_presentation", "triangulate", "enumerate_null_words",
    "Derivation", "SearchCaps", "area_search", "spectrum_table", "verify_derivation",
]
__version__ = "0.1.0"
