"""Static renderings of realized complexes, written as PNG files.

Backend is forced to Agg so rendering works headless; output bytes are
kept reproducible by pinning the PNG metadata (no timestamps, no
library-version strings).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
from mpl_toolkits.mplot3d.art3d import Poly3DCollection  # noqa: E402

from .surface import RealizedComplex

_FACE = "#9ec5de"
_EDGE = "#22384c"


def render_complex(
    R: RealizedComplex,
    path: str | Path,
    title: str | None = None,
    elev: float = 22.0,
    azim: float = -55.0,
) -> Path:
    """Draw the faces of a 3-dimensional realization and save a PNG."""
    if R.dim != 3:
        raise ValueError(f"can only render complexes in R^3, got R^{R.dim}")
    polys = [
        [tuple(float(c) for c in R.coords[v]) for v in cycle]
        for cycle in R.cells.face_cycles
    ]
    fig = plt.figure(figsize=(7.0, 7.0))
    ax = fig.add_subplot(projection="3d")
    ax.add_collection3d(
        Poly3DCollection(
            polys,
            facecolor=_FACE,
            edgecolor=_EDGE,
            linewidths=0.8,
            alpha=0.85,
        )
    )
    points = [pt for poly in polys for pt in poly]
    for axis, setter in zip(
        range(3), (ax.set_xlim, ax.set_ylim, ax.set_zlim)
    ):
        values = [pt[axis] for pt in points]
        lo, hi = min(values), max(values)
        pad = 0.05 * (hi - lo or 1.0)
        setter(lo - pad, hi + pad)
    ax.set_box_aspect((1, 1, 1))
    ax.view_init(elev=elev, azim=azim)
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    path = Path(path)
    fig.savefig(
        path,
        dpi=140,
        bbox_inches="tight",
        metadata={"Software": "wedgesurf"},
    )
    plt.close(fig)
    return path
