"""Sweep figure: aggregation rate against ring size, one line per setting."""

import logging
from pathlib import Path
from typing import TYPE_CHECKING, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

if TYPE_CHECKING:
    from src.services.experiments import SweepTable

logger = logging.getLogger(__name__)


def render_sweep_plot(table: "SweepTable", path: Union[str, Path]) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)

    fig, ax = plt.subplots(figsize=(9, 6))
    for setting in table.settings:
        rates = [100.0 * rate for rate in table.rates(setting)]
        ax.plot(table.n_rings, rates, "o-", label=setting.label, markersize=4)
    ax.set_xlabel("Robots in ring")
    ax.set_ylabel("Aggregated runs [%]")
    ax.set_xticks(list(table.n_rings))
    ax.set_ylim(0.0, 100.0)
    ax.grid(True, alpha=0.4)
    ax.legend(fontsize="x-small", ncol=2)
    fig.tight_layout()
    fig.savefig(target)
    plt.close(fig)

    logger.info(f"Wrote sweep plot to {target}")
    return target
