"""Small helpers shared by the CSV exporters."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

QUANTILES = (0.05, 0.50, 0.95)


def summarize(samples: np.ndarray) -> dict[str, np.ndarray]:
    """Mean and nearest-rank 5/50/95% quantiles over the leading (sample) axis.

    Nearest rank: the q-quantile of n sorted values is the ceil(q*n)-th value,
    i.e. numpy's ``inverted_cdf`` method.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] == 0:
        raise ValueError("cannot summarize an empty sample set")
    q = np.quantile(samples, QUANTILES, axis=0, method="inverted_cdf")
    return {"mean": samples.mean(axis=0), "q05": q[0], "q50": q[1], "q95": q[2]}


def fmt(x: float) -> str:
    return f"{float(x):.6f}"


def write_csv(path: str | Path, header: list[str], rows) -> Path:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path
