"""
Cell complexes, boundary operators, Betti numbers and orientability
"""

from random_cc.topology.complex_analysis import (
    Betti,
    BoundaryMatrices,
    CellComplex2,
    analysis_record,
    boundary_matrices,
    cohomology_dims,
    dump_complex,
    euler_characteristic,
    find_orientation,
    is_orientable,
    load_complex,
    read_complex,
    write_complex,
)

__all__ = [
    "Betti",
    "BoundaryMatrices",
    "CellComplex2",
    "analysis_record",
    "boundary_matrices",
    "cohomology_dims",
    "dump_complex",
    "euler_characteristic",
    "find_orientation",
    "is_orientable",
    "load_complex",
    "read_complex",
    "write_complex",
]
