"""Growth experiment: build a synthetic collection and trace all properties from k=1 to 100.

Writes the growth and trend CSVs through the ``grow`` subcommand, then
prints the Mann-Kendall tau of a few trajectories. Example::

    python3 scripts/run_growth.py --out /tmp/growth --size-mb 1
"""

import argparse
import csv
import importlib.util
from pathlib import Path

from collocnet import cli

HERE = Path(__file__).resolve().parent


def _corpus_writer():
    spec = importlib.util.spec_from_file_location("make_synthetic_corpus", HERE / "make_synthetic_corpus.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module.write_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", type=Path, required=True)
    ap.add_argument("--corpus", type=Path, help="existing corpus; a synthetic one is generated otherwise")
    ap.add_argument("--size-mb", type=float, default=1.0)
    ap.add_argument("--net-type", default="digraph")
    ap.add_argument("--order", choices=["occurrence", "frequency"], default="occurrence")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--with-pvalues", action="store_true", help="bootstrap p-values at every checkpoint (slow)")
    args = ap.parse_args()

    corpus = args.corpus
    if corpus is None:
        corpus = args.out / "corpus"
        _corpus_writer()(corpus, args.size_mb, 50_000, ["alpha", "beta"], 10, args.seed)
    argv = ["grow", "--corpus", str(corpus), "--net-type", args.net_type, "--order", args.order,
            "--seed", str(args.seed), "--out", str(args.out)]
    if not args.with_pvalues:
        argv.append("--skip-pvalues")
    status = cli.main(argv)
    if status:
        return status
    for t in args.net_type.split(","):
        with open(args.out / f"trends_{t}_{args.order}.csv", newline="") as fh:
            for row in csv.DictReader(fh):
                if row["test"] == "mann_kendall" and row["property"] in ("n_vertices", "giant_cc", "giant_scc", "global_clustering"):
                    print(f"{t} {row['property']}: S={row['statistic']} p={row['p_value']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
