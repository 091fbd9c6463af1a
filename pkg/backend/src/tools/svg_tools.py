"""SVG plots of density curves and eigenvalue histograms."""

import logging
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from models.simulation import HistogramResult  # noqa: E402
from models.spectral import DensityCurve  # noqa: E402

logger = logging.getLogger(__name__)


def write_density_svg(
    curve: DensityCurve,
    path: Path,
    hist: Optional[HistogramResult] = None,
) -> Path:
    """Line plot of a density curve, optionally over a histogram, saved as SVG.

    Glyphs are stored as paths and the date stamp is dropped, so the file is
    self-contained and stable across runs.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(8, 5))
    if hist is not None:
        widths = np.diff(hist.edges)
        ax.bar(hist.edges[:-1], hist.heights, width=widths, align="edge",
               color="lightsteelblue", edgecolor="white", label="eigenvalues")
    mask = ~np.isnan(curve.values)
    ax.plot(curve.xs[mask], curve.values[mask], color="steelblue", linewidth=1.5,
            label=f"d_{curve.dist}")
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.set_title(f"Density of {curve.dist}, rho = {curve.rho:g}")
    if hist is not None:
        ax.legend()
    plt.tight_layout()
    with plt.rc_context({"svg.fonttype": "path", "svg.hashsalt": "elliptic"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    logger.info(f"Wrote SVG plot to {path}")
    return path
