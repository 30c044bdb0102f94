"""The rectangular minimum-hop search region between two satellites.

For a minimizing direction combination, walking the corresponding neighbour
links spans a grid with source and destination at opposite corners.  Every
monotone route inside it has the same (minimum) number of hops, so routing
algorithms can restrict their exploration to this region.
"""
from __future__ import annotations

from dataclasses import dataclass

from .hopcount import EAST, SUCCESSOR, DirectionCombo, min_hop_count
from .walker import LEFT, PRED, RIGHT, SUCC, ConstellationParams, SatId, compile_model


@dataclass(frozen=True)
class RectangleGrid:
    """Grid of satellites; cell (i, j) is i horizontal and j vertical hops from the origin."""

    origin: SatId
    horizontal: str
    vertical: str
    h_count: int
    v_count: int
    _rows: tuple[tuple[SatId, ...], ...]

    def cell(self, i: int, j: int) -> SatId:
        if not (0 <= i <= self.h_count and 0 <= j <= self.v_count):
            raise IndexError(f"cell ({i}, {j}) outside {self.h_count}x{self.v_count} grid")
        return self._rows[j][i]


def build_rectangle(
    params: ConstellationParams, src: SatId, dst: SatId, combo: DirectionCombo
) -> RectangleGrid:
    """Materialise the grid for one minimizing direction combination.

    `combo` must come from min_hop_count(...).minimizing_combos; anything else
    would span a rectangle whose routes are not minimum-hop.
    """
    result = min_hop_count(params, src, dst)
    if combo not in result.minimizing_combos:
        raise ValueError(f"{combo} is not a minimizing combination for {src}->{dst}")
    model = compile_model(params)
    nbrs = model.nbrs_rows
    hk = RIGHT if combo.horizontal == EAST else LEFT
    vk = SUCC if combo.vertical == SUCCESSOR else PRED
    row = [model.sat_index(src)]
    for _ in range(combo.h_count):
        row.append(nbrs[row[-1]][hk])
    rows = [row]
    for _ in range(combo.v_count):
        rows.append([nbrs[c][vk] for c in rows[-1]])
    if rows[-1][-1] != model.sat_index(dst):
        raise ValueError(f"combo {combo} does not span a {src}->{dst} rectangle")
    return RectangleGrid(
        origin=src,
        horizontal=combo.horizontal,
        vertical=combo.vertical,
        h_count=combo.h_count,
        v_count=combo.v_count,
        _rows=tuple(tuple(model.sat_id(c) for c in r) for r in rows),
    )
