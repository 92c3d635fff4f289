"""Band topology of three electronic states coupled to a 1:1:1 resonant oscillator."""

__version__ = "0.1.0"

from .chern import ChernClass, chern_class_of_band, indecomposability_test, whitney_sum_check
from .index import predicted_count
from .polyad import enumerate_basis, ladder_matrix, polyad_dimension
from .quantum import band_spectrum, build_hamiltonian, cluster_bands, sweep, transfer_count

__all__ = [
    "ChernClass",
    "band_spectrum",
    "build_hamiltonian",
    "chern_class_of_band",
    "cluster_bands",
    "enumerate_basis",
    "indecomposability_test",
    "ladder_matrix",
    "polyad_dimension",
    "predicted_count",
    "sweep",
    "transfer_count",
    "whitney_sum_check",
]
