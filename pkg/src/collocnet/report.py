"""Histograms, comparison tables and the CSV formats written by the CLI."""

from __future__ import annotations

import csv
import itertools
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from collocnet import stats
from collocnet.metrics import PROPERTY_FIELDS, XMIN_FIELDS, GlobalProperties

# Default properties for the per-genre and per-network-type distribution tables.
FIGURE_PROPERTIES = (
    "n_edges",
    "diameter_directed",
    "diameter_undirected",
    "small_worldliness",
    "global_clustering",
    "shrinkage",
    "alpha",
    "pvalue_alpha",
)

VALUE_FIELDS = PROPERTY_FIELDS + XMIN_FIELDS
INT_FIELDS = {
    "n_vertices", "n_edges", "diameter_directed", "diameter_undirected",
    "n_cc", "giant_cc", "n_scc", "giant_scc", *XMIN_FIELDS,
}


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


# ----------------------------------------------------------------- histogram


@dataclass
class Histogram:
    bin_edges: np.ndarray
    percentages: dict[str, np.ndarray]

    @property
    def labels(self) -> list[str]:
        return list(self.percentages)

    def rows(self) -> list[list]:
        out = []
        for i in range(len(self.bin_edges) - 1):
            out.append([self.bin_edges[i], self.bin_edges[i + 1]] + [self.percentages[s][i] for s in self.labels])
        return out


def histogram(values_by_series: Mapping[str, Iterable[float]], bins: int = 20) -> Histogram:
    """Shared equal-width bins over the pooled finite values; per-series percentages."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    series = {}
    for label, values in values_by_series.items():
        arr = np.asarray([v for v in values if v is not None], dtype=float)
        arr = arr[np.isfinite(arr)]
        if len(arr):
            series[label] = arr
    if not series:
        raise ValueError("no finite values to bin")
    pooled = np.concatenate(list(series.values()))
    lo, hi = float(pooled.min()), float(pooled.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    edges = np.linspace(lo, hi, bins + 1)
    pct = {label: np.histogram(arr, bins=edges)[0] * (100.0 / len(arr)) for label, arr in series.items()}
    return Histogram(edges, pct)


def write_histogram(hist: Histogram, path: Path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bin_left", "bin_right"] + hist.labels)
        for row in hist.rows():
            w.writerow([format_value(float(v)) for v in row])


# ------------------------------------------------------------ property CSV


def property_columns() -> list[str]:
    cols = ["doc_id", "genre", "net_type"]
    for name in VALUE_FIELDS:
        cols += [name, f"{name}_reason"]
    return cols


def property_row(doc_id: str, genre: str, net_type: str, props: GlobalProperties) -> list[str]:
    row = [doc_id, genre, net_type]
    for name in VALUE_FIELDS:
        row += [format_value(props.get(name)), props.reasons.get(name, "")]
    return row


def write_properties(path: Path, rows: Iterable[list[str]]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(property_columns())
        w.writerows(rows)


@dataclass
class PropertyRecord:
    doc_id: str
    genre: str
    net_type: str
    props: GlobalProperties


def read_properties(path: Path) -> list[PropertyRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            props = GlobalProperties()
            for name in VALUE_FIELDS:
                text = row.get(name, "")
                if text == "":
                    setattr(props, name, None)
                    if row.get(f"{name}_reason"):
                        props.reasons[name] = row[f"{name}_reason"]
                else:
                    setattr(props, name, int(text) if name in INT_FIELDS else float(text))
            records.append(PropertyRecord(row["doc_id"], row["genre"], row["net_type"], props))
    return records


# ---------------------------------------------------------------- comparisons

COMPARE_COLUMNS = [
    "property", "test", "group_a", "group_b", "n_a", "n_b",
    "statistic", "p_value", "p_bonferroni", "family_size", "notes",
]
OMNIBUS_TESTS = (("anova", stats.one_way_anova), ("kruskal_wallis", stats.kruskal_wallis))
PAIRWISE_TESTS = (("t_test", stats.t_test), ("mann_whitney_u", stats.mann_whitney_u), ("ks_two_sample", stats.ks_two_sample))


def bonferroni_family_size(n_groups: int, n_properties: int) -> int:
    """Pairwise comparisons per test: C(groups, 2) x properties."""
    return math.comb(n_groups, 2) * n_properties


def compare_groups(
    values: Mapping[str, Mapping[str, Sequence[float]]],
    properties: Sequence[str],
    groups: Sequence[str],
) -> list[list[str]]:
    """Omnibus and pairwise test rows.

    ``values[property][group]`` holds the defined values of a property in a
    group. Omnibus rows carry ``group_b = "omnibus"`` and are not corrected;
    pairwise p-values are Bonferroni-corrected with the family size of
    :func:`bonferroni_family_size`.
    """
    family = bonferroni_family_size(len(groups), len(properties))
    rows = []
    for prop in properties:
        by_group = {g: np.asarray(values.get(prop, {}).get(g, []), dtype=float) for g in groups}
        usable = [g for g in groups if len(by_group[g]) >= 2]
        skipped = [g for g in groups if g not in usable]
        note = f"skipped groups with < 2 values: {','.join(skipped)}" if skipped else ""
        for name, fn in OMNIBUS_TESTS:
            if len(usable) < 2:
                rows.append([prop, name, "|".join(groups), "omnibus", "", "", "", "", "", 1, "too few groups"])
                continue
            res = fn([by_group[g] for g in usable])
            rows.append([
                prop, name, "|".join(usable), "omnibus", sum(res.group_sizes), "",
                res.statistic, res.p_value, res.p_value, 1, "; ".join(filter(None, res.notes + [note])),
            ])
        for a, b in itertools.combinations(groups, 2):
            for name, fn in PAIRWISE_TESTS:
                if a not in usable or b not in usable:
                    rows.append([prop, name, a, b, len(by_group[a]), len(by_group[b]), "", "", "", family, "too few values"])
                    continue
                res = fn(by_group[a], by_group[b])
                p_corr = stats.bonferroni([res.p_value], family)[0] if not math.isnan(res.p_value) else math.nan
                rows.append([
                    prop, name, a, b, len(by_group[a]), len(by_group[b]),
                    res.statistic, res.p_value, p_corr, family, "; ".join(res.notes),
                ])
    return rows


def write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format_value(float(v)) if isinstance(v, (float, np.floating)) else format_value(v) for v in row])


# -------------------------------------------------------------------- growth


def growth_columns() -> list[str]:
    cols = ["k", "n_stream_edges"]
    for name in VALUE_FIELDS:
        cols += [name, f"{name}_reason"]
    return cols


def growth_rows(trace) -> list[list[str]]:
    rows = []
    for k, props in trace.checkpoints:
        row = [str(k), str(math.ceil(k / 100.0 * trace.stream_length))]
        for name in VALUE_FIELDS:
            row += [format_value(props.get(name)), props.reasons.get(name, "")]
        rows.append(row)
    return rows
