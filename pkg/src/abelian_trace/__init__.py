"""Exact trace images and the index I(L/K) for abelian number fields of equal conductor."""

from .cyclotomic import CycElt, cyclo_poly, galois_apply, tensor_split, trace_over_subgroup
from .fields import AbelianField, field_from_subgroup, ring_of_integers
from .lattice import INFINITE, IntLattice, RatLattice, hnf, index, lattice_from, snf
from .trace import index_I, leopoldt_index, predicted_I, trace_lattice

__version__ = "0.1.0"
