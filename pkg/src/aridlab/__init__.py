"""Automatic sequences, arid sets and generalised polynomials."""

from . import combinat, corpus, dfao, dynamics, genpoly, growth, seqkit, setalg
from .dfao import (CANONICAL, LSD, MSD, ROBUST, Dfao, DfaoFormatError, ResourceError,
                   analyze, digits, equivalent, from_digits, from_text, minimize,
                   normalize, product, to_reading, to_text)
from .growth import arid_decompose, classify, count_below, count_range, max_window
from .seqkit import kernel_empirical, kernel_exact, weak_periodicity_search

__version__ = "0.1.0"
