"""
Two-dimensional cell complexes and their topology

Boundary operators use oriented edges (u, v) with u < v and cells oriented by their
canonical traversal. Ranks are exact over the rationals.
"""

import json
import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

import networkx as nx
import numpy as np
import scipy.sparse

from random_cc.errors import InvalidInputError, ValidationError
from random_cc.graphs.graph import Edge, Graph
from random_cc.trees.spanning_forest import Cycle
from random_cc.utils.exact_linalg import bareiss_rank, sparse_column_rank

logger = logging.getLogger(__name__)

_DENSE_RANK_LIMIT = 40_000  # matrix entries


@dataclass(frozen=True)
class CellComplex2:
    """A 1-skeleton with 2-cells attached along simple cycles"""

    skeleton: Graph
    cells: Tuple[Cycle, ...] = ()

    def __post_init__(self):
        cells = tuple(sorted(self.cells, key=lambda c: c.nodes))
        for previous, current in zip(cells, cells[1:]):
            if previous == current:
                raise ValidationError(f"duplicate cell {current.nodes}")
        for cell in cells:
            cell.validate(self.skeleton)
        object.__setattr__(self, "cells", cells)

    @property
    def node_count(self) -> int:
        return self.skeleton.node_count

    @property
    def edge_count(self) -> int:
        return self.skeleton.edge_count

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    @cached_property
    def edge_index(self) -> Dict[Edge, int]:
        return {edge: i for i, edge in enumerate(self.skeleton.edges())}


class BoundaryMatrices(NamedTuple):
    b1: scipy.sparse.csc_matrix  # n x m
    b2: scipy.sparse.csc_matrix  # m x k


class Betti(NamedTuple):
    b0: int
    b1: int
    b2: int


def _cell_column(cc: CellComplex2, cell: Cycle) -> Dict[int, int]:
    """Signed boundary of a cell: +1 where the traversal follows u < v, else -1"""
    column = {}
    for a, b in cell.directed_edges():
        key = (a, b) if a < b else (b, a)
        if key not in cc.edge_index:
            raise ValidationError(f"cell {cell.nodes} uses non-edge {key}")
        column[cc.edge_index[key]] = 1 if a < b else -1
    return column


def boundary_matrices(cc: CellComplex2) -> BoundaryMatrices:
    """
    Signed incidence B1 and cell boundary B2

    Raises:
        ValidationError: a cell uses a non-edge, or B1 B2 != 0
    """
    n, m, k = cc.node_count, cc.edge_count, cc.cell_count
    edges = cc.skeleton.edges()

    rows = np.array([u for u, _ in edges] + [v for _, v in edges], dtype=np.int64)
    cols = np.concatenate([np.arange(m), np.arange(m)]).astype(np.int64)
    data = np.concatenate([-np.ones(m), np.ones(m)]).astype(np.int64)
    b1 = scipy.sparse.csc_matrix((data, (rows, cols)), shape=(n, m), dtype=np.int64)

    b2_rows, b2_cols, b2_data = [], [], []
    for j, cell in enumerate(cc.cells):
        for row, sign in _cell_column(cc, cell).items():
            b2_rows.append(row)
            b2_cols.append(j)
            b2_data.append(sign)
    b2 = scipy.sparse.csc_matrix(
        (
            np.array(b2_data, dtype=np.int64),
            (np.array(b2_rows, dtype=np.int64), np.array(b2_cols, dtype=np.int64)),
        ),
        shape=(m, k),
        dtype=np.int64,
    )

    if (b1 @ b2).count_nonzero():
        raise ValidationError("boundary of a boundary is not zero")
    return BoundaryMatrices(b1=b1, b2=b2)


def cell_boundary_rank(cc: CellComplex2) -> int:
    """Rank of B2 over the rationals; dense Bareiss for small matrices, sparse otherwise"""
    columns = [_cell_column(cc, cell) for cell in cc.cells]
    if not columns:
        return 0
    if cc.edge_count * len(columns) <= _DENSE_RANK_LIMIT:
        dense = [[column.get(row, 0) for column in columns] for row in range(cc.edge_count)]
        return bareiss_rank(dense)
    return sparse_column_rank(columns)


def cohomology_dims(cc: CellComplex2) -> Betti:
    """(b0, b1, b2) with b1 = m - n + b0 - rank B2 and b2 = k - rank B2"""
    rank = cell_boundary_rank(cc)
    b0 = cc.skeleton.component_count
    return Betti(
        b0=b0,
        b1=cc.edge_count - cc.node_count + b0 - rank,
        b2=cc.cell_count - rank,
    )


def euler_characteristic(cc: CellComplex2) -> int:
    return cc.node_count - cc.edge_count + cc.cell_count


def find_orientation(cc: CellComplex2) -> Optional[Dict[int, int]]:
    """
    Flip (+1 / -1) per cell so that each edge shared by two cells is traversed in
    opposite directions, or None when no such choice exists or an edge lies in
    more than two cells.
    """
    incidences: Dict[int, List[Tuple[int, int]]] = {}
    for j, cell in enumerate(cc.cells):
        for row, sign in _cell_column(cc, cell).items():
            incidences.setdefault(row, []).append((j, sign))

    constraints = nx.MultiGraph()
    constraints.add_nodes_from(range(cc.cell_count))
    for row, cells in incidences.items():
        if len(cells) > 2:
            return None
        if len(cells) == 2:
            (a, sign_a), (b, sign_b) = cells
            constraints.add_edge(a, b, product=-sign_a * sign_b)

    orientation: Dict[int, int] = {}
    for component in nx.connected_components(constraints):
        root = min(component)
        orientation[root] = 1
        for parent, child in nx.bfs_edges(constraints, root):
            product = next(iter(constraints[parent][child].values()))["product"]
            orientation[child] = orientation[parent] * product

    for a, b, product in constraints.edges(data="product"):
        if orientation[a] * orientation[b] != product:
            return None
    return orientation


def is_orientable(cc: CellComplex2) -> bool:
    return find_orientation(cc) is not None


def complex_to_dict(cc: CellComplex2, meta: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {
        "n": cc.node_count,
        "edges": [[u, v] for u, v in cc.skeleton.edges()],
        "cells": [cell.to_list() for cell in cc.cells],
        "meta": meta or {},
    }


def dump_complex(cc: CellComplex2, meta: Optional[Dict[str, Any]] = None) -> str:
    """JSON document with keys n, edges, cells and meta (sorted keys)"""
    return json.dumps(complex_to_dict(cc, meta), sort_keys=True) + "\n"


def load_complex(text: str) -> Tuple[CellComplex2, Dict[str, Any]]:
    """
    Parse a complex document

    Raises:
        InvalidInputError: not JSON or missing keys
        ValidationError: edges or cells violate the complex invariants
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"complex document is not valid JSON: {e}")
    missing = [key for key in ("n", "edges", "cells") if key not in data]
    if missing:
        raise InvalidInputError(f"complex document misses keys {missing}")

    skeleton = Graph.from_edges(int(data["n"]), [tuple(edge) for edge in data["edges"]])
    cells = [Cycle.canonical(nodes) for nodes in data["cells"]]
    return CellComplex2(skeleton, tuple(cells)), dict(data.get("meta", {}))


def write_complex(cc: CellComplex2, path: str, meta: Optional[Dict[str, Any]] = None) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dump_complex(cc, meta))
    return target


def read_complex(path: str) -> Tuple[CellComplex2, Dict[str, Any]]:
    return load_complex(Path(path).read_text())


def analysis_record(cc: CellComplex2) -> Dict[str, Any]:
    """Record emitted by the analyze command"""
    betti = cohomology_dims(cc)
    return {
        "b0": betti.b0,
        "b1": betti.b1,
        "b2": betti.b2,
        "orientable": is_orientable(cc),
        "n": cc.node_count,
        "m": cc.edge_count,
        "k": cc.cell_count,
    }
