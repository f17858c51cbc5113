"""Synthetic desk-scale networks for tests, demos and benchmarks."""

from __future__ import annotations

from .demand import M_PER_DEG_LAT, M_PER_DEG_LON
from .network import RoadNetwork


def grid_network(rows: int = 20, cols: int = 20, spacing_m: float = 250.0,
                 speed: float = 8.33, corridor_speed: float = 25.0,
                 corridor_rows: tuple[int, ...] = (10,),
                 corridor_cols: tuple[int, ...] = (),
                 regulated_every: int = 3) -> RoadNetwork:
    """Bidirectional grid with fast corridor rows/columns.

    Nodes sit on a ``rows x cols`` lattice with ``spacing_m`` metres
    between neighbours (placed near lon/lat 0 so tiling distances are
    exact).  Horizontal edges on ``corridor_rows`` and vertical edges
    on ``corridor_cols`` get ``corridor_speed`` instead of ``speed``,
    making them strongly attractive under free-flow routing.  Every
    node with ``(row + col) % regulated_every == 0`` is flagged as a
    regulated intersection.
    """
    dlon = spacing_m / M_PER_DEG_LON
    dlat = spacing_m / M_PER_DEG_LAT
    nodes = []
    for r in range(rows):
        for c in range(cols):
            regulated = regulated_every > 0 and (r + c) % regulated_every == 0
            nodes.append((f"n{r}_{c}", c * dlon, r * dlat, regulated))

    def node_name(r: int, c: int) -> str:
        return f"n{r}_{c}"

    edges = []
    eid = 0

    def add_pair(r1, c1, r2, c2, edge_speed):
        nonlocal eid
        edges.append((f"e{eid}", node_name(r1, c1), node_name(r2, c2),
                      spacing_m, edge_speed))
        eid += 1
        edges.append((f"e{eid}", node_name(r2, c2), node_name(r1, c1),
                      spacing_m, edge_speed))
        eid += 1

    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                s = corridor_speed if r in corridor_rows else speed
                add_pair(r, c, r, c + 1, s)
            if r + 1 < rows:
                s = corridor_speed if c in corridor_cols else speed
                add_pair(r, c, r + 1, c, s)
    return RoadNetwork.from_records(nodes, edges)
