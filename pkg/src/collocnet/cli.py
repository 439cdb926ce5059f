"""Command line driver: corpus in, CSV and JSON artifacts out.

Subcommands::

    collocnet build    --corpus DIR --net-type all --out OUT
    collocnet props    --corpus DIR --net-type digraph,undigraph1 --out OUT
    collocnet dist     --corpus DIR --by genre --net-type digraph --out OUT
    collocnet compare  --props-csv OUT/properties.csv --by genre --out OUT2
    collocnet grow     --corpus DIR --net-type digraph --order occurrence --out OUT
    collocnet fit      --input degrees.txt --out OUT

Every option can also be set through an environment variable named
``COLLOCNET_`` followed by the option name in upper case with dashes turned
into underscores (``COLLOCNET_BOOTSTRAP_B=500``). Flags given on the command
line win over the environment.

Data artifacts are byte-identical across reruns with the same corpus,
configuration and seed. The run timestamp only appears in ``metadata.json``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import platform
import sys
from collections import defaultdict
from datetime import datetime, timezone
from pathlib import Path

import numba
import numpy as np

from collocnet import __version__, graphalg, powerlaw, report
from collocnet.corpus import Corpus, load_corpus
from collocnet.errors import UndefinedProperty
from collocnet.incremental import growth_trace, order_edges, trend_tests
from collocnet.metrics import PROPERTY_FIELDS, GlobalProperties, PropertyConfig, compute_properties
from collocnet.netbuild import NetType, build_collection_network, build_network, write_edgelist

log = logging.getLogger("collocnet")

ENV_PREFIX = "COLLOCNET_"
TREND_PROPERTIES = PROPERTY_FIELDS


class ConfigError(Exception):
    """Invalid run configuration; reported with exit status 2."""


# ------------------------------------------------------------------ parsing


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])


def _add_corpus(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument("--corpus", type=Path, required=required, help="corpus root (<root>/<genre>/*.txt)")
    p.add_argument("--manifest", type=Path, help="tab-separated path/genre list, paths relative to the root")


def _add_net_type(p: argparse.ArgumentParser, default: str = "all"):
    p.add_argument(
        "--net-type",
        default=default,
        help="comma list of digraph, undigraph1, undigraph2, sdigraph, sundigraph1, sundigraph2, or all",
    )


def _add_property_config(p: argparse.ArgumentParser):
    p.add_argument("--baseline", choices=["analytic", "sampled"], default="analytic")
    p.add_argument("--baseline-samples", type=int, default=10)
    p.add_argument("--bootstrap-b", type=int, default=100)
    p.add_argument("--xmin-fixed", type=int, default=None, help="fix xmin instead of estimating it")
    p.add_argument("--skip-pvalues", action="store_true", help="do not bootstrap goodness-of-fit p-values")


def _add_grouping(p: argparse.ArgumentParser):
    p.add_argument("--props-csv", type=Path, help="reuse a properties CSV instead of recomputing")
    p.add_argument("--by", choices=["genre", "net-type"], default="genre")
    p.add_argument("--genre", help="genre to use when grouping by net type")
    p.add_argument("--props", default=",".join(report.FIGURE_PROPERTIES), help="comma list of properties")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="collocnet", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"collocnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="serialize networks as edge lists")
    _add_common(p)
    _add_corpus(p)
    _add_net_type(p)
    p.add_argument("--collection", action="store_true", help="also build one network per genre")

    p = sub.add_parser("props", help="per-document properties CSV")
    _add_common(p)
    _add_corpus(p)
    _add_net_type(p)
    _add_property_config(p)

    p = sub.add_parser("dist", help="histogram CSVs per property")
    _add_common(p)
    _add_corpus(p, required=False)
    _add_net_type(p, default="digraph")
    _add_property_config(p)
    _add_grouping(p)
    p.add_argument("--bins", type=int, default=20)

    p = sub.add_parser("compare", help="omnibus and pairwise test report")
    _add_common(p)
    _add_corpus(p, required=False)
    _add_net_type(p, default="digraph")
    _add_property_config(p)
    _add_grouping(p)

    p = sub.add_parser("grow", help="growth trace and trend tests")
    _add_common(p)
    _add_corpus(p)
    _add_net_type(p, default="digraph")
    _add_property_config(p)
    p.add_argument("--order", choices=["occurrence", "frequency"], default="occurrence")
    p.add_argument("--checkpoints", default="1-100", help="range 'a-b' or comma list of percentages")
    p.add_argument("--genre", help="restrict the collection to one genre")

    p = sub.add_parser("fit", help="power-law fit of one integer per line")
    _add_common(p)
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--bootstrap-b", type=int, default=100)
    p.add_argument("--xmin-fixed", type=int, default=None)
    p.add_argument("--skip-pvalues", action="store_true")
    return parser


def _env_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"cannot read {text!r} as a boolean")


def apply_env_defaults(parser: argparse.ArgumentParser, environ=os.environ):
    """Replace option defaults with ``COLLOCNET_*`` environment values."""
    subparsers = [a for a in parser._actions if isinstance(a, argparse._SubParsersAction)]
    for sp in subparsers[0].choices.values():
        for action in sp._actions:
            if not action.option_strings or action.dest == "help":
                continue
            key = ENV_PREFIX + action.dest.upper()
            if key not in environ:
                continue
            raw = environ[key]
            if isinstance(action, argparse._StoreTrueAction):
                action.default = _env_bool(raw)
            else:
                # argparse applies ``type`` to string defaults itself.
                action.default = raw
                action.required = False


def parse_checkpoints(text: str) -> list[int]:
    try:
        if "-" in text:
            lo, hi = (int(x) for x in text.split("-", 1))
            ks = list(range(lo, hi + 1))
        else:
            ks = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --checkpoints {text!r}") from exc
    if not ks or any(not 1 <= k <= 100 for k in ks) or any(b <= a for a, b in zip(ks, ks[1:])):
        raise ConfigError("checkpoints must be strictly increasing integers in 1..100")
    return ks


def _net_types(text: str) -> list[NetType]:
    try:
        return NetType.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _property_config(args) -> PropertyConfig:
    try:
        return PropertyConfig(
            seed=args.seed,
            baseline=getattr(args, "baseline", "analytic"),
            baseline_samples=getattr(args, "baseline_samples", 10),
            bootstrap_b=args.bootstrap_b,
            compute_pvalues=not args.skip_pvalues,
            xmin_fixed=args.xmin_fixed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _load(args) -> Corpus:
    if args.corpus is None:
        raise ConfigError("--corpus or --props-csv is required")
    try:
        return load_corpus(args.corpus, args.manifest)
    except FileNotFoundError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------- commands


def _failed_properties(exc: Exception) -> GlobalProperties:
    props = GlobalProperties()
    for name in report.VALUE_FIELDS:
        props.set_undefined(name, f"error: {type(exc).__name__}")
    return props


def compute_records(corpus: Corpus, net_types: list[NetType], config: PropertyConfig) -> list[report.PropertyRecord]:
    """Document-level properties; failures become reason-coded rows."""
    records = []
    for doc in corpus:
        for t in net_types:
            try:
                props = compute_properties(build_network(doc.tokens, t), config, document_level=True)
            except (UndefinedProperty, ValueError, ZeroDivisionError) as exc:
                log.warning("%s [%s]: %s", doc.doc_id, t.value, exc)
                props = _failed_properties(exc)
            records.append(report.PropertyRecord(doc.doc_id, doc.genre, t.value, props))
    return records


def cmd_build(args, out: Path) -> dict:
    corpus = _load(args)
    types = _net_types(args.net_type)
    written = 0
    for t in types:
        for doc in corpus:
            target = out / "networks" / t.value / (doc.doc_id + ".edgelist")
            target.parent.mkdir(parents=True, exist_ok=True)
            write_edgelist(build_network(doc.tokens, t), target)
            written += 1
        if args.collection:
            for genre in corpus.genres:
                target = out / "collections" / t.value / f"{genre}.edgelist"
                target.parent.mkdir(parents=True, exist_ok=True)
                write_edgelist(build_collection_network(Corpus(corpus.by_genre(genre)), t), target)
                written += 1
    log.info("wrote %d edge lists", written)
    return {"n_documents": len(corpus), "net_types": [t.value for t in types], "files": written}


def cmd_props(args, out: Path) -> dict:
    corpus = _load(args)
    types = _net_types(args.net_type)
    config = _property_config(args)
    records = compute_records(corpus, types, config)
    report.write_properties(
        out / "properties.csv",
        (report.property_row(r.doc_id, r.genre, r.net_type, r.props) for r in records),
    )
    return {"n_documents": len(corpus), "net_types": [t.value for t in types], "rows": len(records)}


def _grouped_records(args) -> tuple[list[report.PropertyRecord], list[str]]:
    props = [p.strip() for p in args.props.split(",") if p.strip()]
    unknown = [p for p in props if p not in report.VALUE_FIELDS]
    if unknown:
        raise ConfigError(f"unknown properties: {', '.join(unknown)}")
    if args.props_csv is not None:
        records = report.read_properties(args.props_csv)
    else:
        records = compute_records(_load(args), _net_types(args.net_type), _property_config(args))
    return records, props


def _groups(args, records) -> tuple[str, dict[str, list[report.PropertyRecord]]]:
    """Scope label and records per group (genres for one net type, or net types for one genre)."""
    if args.by == "genre":
        types = _net_types(args.net_type)
        if len(types) != 1:
            raise ConfigError("grouping by genre needs exactly one --net-type")
        scope = types[0].value
        selected = [r for r in records if r.net_type == scope]
        key = "genre"
    else:
        if not args.genre:
            raise ConfigError("grouping by net type needs --genre")
        scope = args.genre
        selected = [r for r in records if r.genre == scope]
        key = "net_type"
    groups: dict[str, list] = defaultdict(list)
    for r in selected:
        groups[getattr(r, key)].append(r)
    if not groups:
        raise ConfigError(f"no records for {scope!r}")
    if key == "net_type":
        order = [t.value for t in NetType if t.value in groups]
    else:
        order = sorted(groups)
    return scope, {g: groups[g] for g in order}


def cmd_dist(args, out: Path) -> dict:
    if args.bins < 1:
        raise ConfigError("--bins must be >= 1")
    records, props = _grouped_records(args)
    scope, groups = _groups(args, records)
    written = []
    for prop in props:
        series = {g: [r.props.get(prop) for r in recs] for g, recs in groups.items()}
        try:
            hist = report.histogram(series, args.bins)
        except ValueError:
            log.warning("%s: no finite values, histogram skipped", prop)
            continue
        name = f"dist_{scope}_{prop}.csv"
        report.write_histogram(hist, out / name)
        written.append(name)
    return {"scope": scope, "by": args.by, "groups": list(groups), "files": written, "bins": args.bins}


def cmd_compare(args, out: Path) -> dict:
    records, props = _grouped_records(args)
    scope, groups = _groups(args, records)
    values = {
        prop: {g: [r.props.get(prop) for r in recs if r.props.get(prop) is not None] for g, recs in groups.items()}
        for prop in props
    }
    rows = report.compare_groups(values, props, list(groups))
    report.write_rows(out / f"compare_{scope}.csv", report.COMPARE_COLUMNS, rows)
    return {
        "scope": scope,
        "by": args.by,
        "groups": list(groups),
        "properties": props,
        "bonferroni_family_size": report.bonferroni_family_size(len(groups), len(props)),
    }


def cmd_grow(args, out: Path) -> dict:
    corpus = _load(args)
    if args.genre:
        docs = corpus.by_genre(args.genre)
        if not docs:
            raise ConfigError(f"genre {args.genre!r} not in corpus")
        corpus = Corpus(docs)
    types = _net_types(args.net_type)
    ks = parse_checkpoints(args.checkpoints)
    config = _property_config(args)
    files = []
    for t in types:
        stream = order_edges(corpus, t, args.order)
        trace = growth_trace(stream, ks, config)
        stem = f"growth_{t.value}_{args.order}"
        report.write_rows(out / f"{stem}.csv", report.growth_columns(), report.growth_rows(trace))
        trend_rows = []
        for prop in TREND_PROPERTIES:
            try:
                results = trend_tests(trace, prop)
            except ValueError as exc:
                trend_rows.append([prop, "", "", "", "", str(exc)])
                continue
            for res in results:
                trend_rows.append([prop, res.test_name, res.statistic, res.p_value, res.group_sizes[0], "; ".join(res.notes)])
        report.write_rows(
            out / f"trends_{t.value}_{args.order}.csv",
            ["property", "test", "statistic", "p_value", "n_points", "notes"],
            trend_rows,
        )
        files += [f"{stem}.csv", f"trends_{t.value}_{args.order}.csv"]
    return {"order": args.order, "checkpoints": ks, "files": files, "genre": args.genre}


def cmd_fit(args, out: Path) -> dict:
    try:
        text = args.input.read_text(encoding="utf-8")
        samples = np.array([int(line) for line in text.split()], dtype=np.int64)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read integers from {args.input}: {exc}") from exc
    if args.bootstrap_b < 1 or (args.xmin_fixed is not None and args.xmin_fixed < 1):
        raise ConfigError("--bootstrap-b and --xmin-fixed must be >= 1")
    row = {"n": len(samples), "xmin": None, "alpha": None, "ks_distance": None, "n_tail": None, "pvalue": None, "reason": ""}
    try:
        fit = powerlaw.fit_powerlaw(samples[samples > 0], args.xmin_fixed)
        row.update(xmin=fit.xmin, alpha=fit.alpha, ks_distance=fit.ks_distance, n_tail=fit.n_tail)
        if not args.skip_pvalues:
            row["pvalue"] = powerlaw.gof_pvalue(samples[samples > 0], fit, args.bootstrap_b, args.seed, args.xmin_fixed)
    except UndefinedProperty as exc:
        row["reason"] = exc.reason
    report.write_rows(out / "fit.csv", list(row), [list(row.values())])
    return {"input": str(args.input), "n_zero_dropped": int((samples <= 0).sum())}


COMMANDS = {
    "build": cmd_build,
    "props": cmd_props,
    "dist": cmd_dist,
    "compare": cmd_compare,
    "grow": cmd_grow,
    "fit": cmd_fit,
}


def _config_echo(args) -> dict:
    echo = {}
    for key, value in sorted(vars(args).items()):
        echo[key] = str(value) if isinstance(value, Path) else value
    return echo


def write_metadata(out: Path, args, summary: dict):
    meta = {
        "command": args.command,
        "seed": args.seed,
        "config": _config_echo(args),
        "summary": summary,
        "rng": graphalg.RNG_NAME,
        "versions": {
            "collocnet": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "numba": numba.__version__,
        },
        "env_prefix": ENV_PREFIX,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    (out / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        apply_env_defaults(parser)
    except ConfigError as exc:
        print(f"collocnet: error: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
    out: Path = args.out
    try:
        out.mkdir(parents=True, exist_ok=True)
        summary = COMMANDS[args.command](args, out)
    except ConfigError as exc:
        print(f"collocnet: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"collocnet: error: {exc}", file=sys.stderr)
        return 1
    write_metadata(out, args, summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
