"""Command-line entry point.

Subcommands: ingest, cluster, sweep, stats, export-distances.
Exit codes: 0 success, 2 input/schema error, 3 parameter error, 4 internal error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import shutil
import sys
import tempfile
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import __version__, analysis, hierarchy, kernels, linegraph
from .errors import InputError, ParameterError, SchemaError
from .extraction import OUTLIER, Clustering, run_pipeline, write_condensed_csv
from .hypergraph import (clean_authors, edge_size_histogram, edge_time_histogram, normalize_times,
                         parse_csv, parse_jsonl, write_jsonl)
from .similarity import SimilarityKind

log = logging.getLogger("edgeclust")

EXIT_OK, EXIT_INPUT, EXIT_PARAM, EXIT_INTERNAL = 0, 2, 3, 4

DEFAULTS = {
    "prefix": "n/a",
    "time_unit": "days",
    "similarity": "jaccard",
    "slack_ratio": 1.1,
    "slack_offset": 2.0,
    "min_cluster_size": 10,
    "workers": None,
    "max_degree": None,
    "threshold": 10,
    "bin_width": 30.0,
    "kind": "topics",
}
CONVERTERS = {
    "slack_ratio": float, "slack_offset": float, "min_cluster_size": int, "workers": int,
    "max_degree": int, "threshold": int, "bin_width": float, "sigma": float,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParameterError(message)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment; dashes in keys become underscores."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def resolve(args, keys) -> None:
    """Fill unset options from the config file, then from defaults."""
    file_cfg = read_config(args.config) if getattr(args, "config", None) else {}
    for key in keys:
        if getattr(args, key, None) is not None:
            continue
        if key in file_cfg:
            raw = file_cfg[key]
            try:
                value = CONVERTERS.get(key, str)(raw)
            except ValueError:
                raise ParameterError(f"config: bad value for {key}: {raw!r}") from None
        else:
            value = DEFAULTS.get(key)
        setattr(args, key, value)


def parse_sigmas(text: str) -> list[float]:
    """Comma list; an item ``a:b:step`` expands to ``a, a+step, ..., b``."""
    out = []
    try:
        for item in text.split(","):
            item = item.strip()
            if ":" in item:
                a, b, step = (float(x) for x in item.split(":"))
                if step <= 0:
                    raise ParameterError("sigma range step must be positive")
                out.extend(float(x) for x in np.arange(a, b + step / 2, step))
            elif item:
                out.append(float(item))
    except ValueError:
        raise ParameterError(f"cannot parse sigma list {text!r}") from None
    if not out or any(s <= 0 for s in out):
        raise ParameterError("sigmas must be positive")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ParameterError("sigmas must be sorted ascending")
    return out


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


@contextmanager
def staged_output(outdir):
    """Collect outputs in a temp dir and move them into place only on success."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=".partial-", dir=outdir))
    try:
        yield tmp
        for f in sorted(tmp.iterdir()):
            os.replace(f, outdir / f.name)
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


def write_manifest(tmp: Path, command: str, params: dict, inputs: list) -> None:
    outputs = sorted(p.name for p in tmp.iterdir()) + ["manifest.json"]
    manifest = {
        "command": command,
        "version": __version__,
        "parameters": params,
        "inputs": [{"path": str(p), "sha256": file_sha256(p)} for p in inputs],
        "outputs": sorted(outputs),
    }
    (tmp / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")


def read_hypergraph(args, clean=True):
    path = Path(args.input)
    if getattr(args, "incidence", None):
        with open(path, newline="") as fe, open(args.incidence, newline="") as fi:
            H = parse_csv(fe, fi)
    else:
        with open(path, "rb") as fh:
            H = parse_jsonl(fh)
    report = None
    if clean and args.prefix:
        H, report = clean_authors(H, args.prefix)
    log.info("loaded %d edges, %d vertices from %s", H.n_edges, H.n_vertices, path)
    return H, report


def _inputs(args):
    return [Path(args.input)] + ([Path(args.incidence)] if getattr(args, "incidence", None) else [])


def sim_from_args(args) -> SimilarityKind:
    return SimilarityKind(args.similarity, args.slack_ratio, args.slack_offset)


def cmd_ingest(args) -> int:
    resolve(args, ["prefix"])
    H, report = read_hypergraph(args)
    with staged_output(args.output) as tmp:
        with open(tmp / "edges.jsonl", "w") as fh:
            write_jsonl(H, fh)
        (tmp / "clean_report.json").write_text(json.dumps(report.to_json() if report else
                                                          {"removed_vertices": 0, "removed_edges": 0}) + "\n")
        write_manifest(tmp, "ingest", {"prefix": args.prefix}, _inputs(args))
    log.info("ingest: kept %d edges", H.n_edges)
    return EXIT_OK


def _cluster_params(args, sim) -> dict:
    return {
        "sigma": args.sigma, "similarity": sim.name, "slack_ratio": sim.slack_ratio,
        "slack_offset": sim.slack_offset, "min_cluster_size": args.min_cluster_size,
        "time_unit": args.time_unit, "prefix": args.prefix,
        "allow_single_root": args.allow_single_root,
        "join_components": not args.per_component_roots, "max_degree": args.max_degree,
    }


def cmd_cluster(args) -> int:
    resolve(args, ["prefix", "time_unit", "similarity", "slack_ratio", "slack_offset",
                   "min_cluster_size", "workers", "max_degree", "sigma"])
    if args.sigma is None:
        raise ParameterError("--sigma is required")
    sim = sim_from_args(args)
    H, _ = read_hypergraph(args)
    H = normalize_times(H, args.time_unit)
    res = run_pipeline(H, args.sigma, sim, args.min_cluster_size,
                       allow_single_root=args.allow_single_root,
                       join_components=not args.per_component_roots,
                       max_degree=args.max_degree, workers=args.workers)
    C = res.clustering
    reports = analysis.cluster_stats(H, C)
    log.info("cluster: %d clusters, %.1f%% outliers", C.n_clusters, 100 * C.outlier_fraction)
    with staged_output(args.output) as tmp:
        write_labels(H, C, tmp / "labels.tsv")
        sizes = C.sizes()
        clusters = [{"id": c, "size": int(sizes[c]), "stability": float(_fmt(C.stability[c]))}
                    for c in range(C.n_clusters)]
        (tmp / "clusters.json").write_text(json.dumps(clusters, indent=1) + "\n")
        with open(tmp / "report.json", "w") as fh:
            analysis.write_report_json(reports, fh)
        (tmp / "summary.json").write_text(json.dumps(analysis.summary(H, C, reports), indent=1) + "\n")
        if args.dump_linegraph:
            with open(tmp / "linegraph.csv", "w") as fh:
                linegraph.write_csv(res.line_graph, fh)
            comp = linegraph.connected_components(res.line_graph)
            (tmp / "components.json").write_text(json.dumps(comp.to_json()) + "\n")
        if args.dump_dendrogram:
            with open(tmp / "dendrogram.csv", "w") as fh:
                hierarchy.write_csv(res.dendrogram, fh)
        if args.dump_condensed:
            with open(tmp / "condensed.csv", "w") as fh:
                write_condensed_csv(res.tree, fh)
        write_manifest(tmp, "cluster", _cluster_params(args, sim), _inputs(args))
    return EXIT_OK


def cmd_sweep(args) -> int:
    resolve(args, ["prefix", "time_unit", "similarity", "slack_ratio", "slack_offset",
                   "min_cluster_size", "workers", "threshold"])
    sigmas = parse_sigmas(args.sigmas)
    sim = sim_from_args(args)
    H, _ = read_hypergraph(args)
    H = normalize_times(H, args.time_unit)
    rows = analysis.sigma_sweep(H, sigmas, sim, args.min_cluster_size, full=args.full,
                                threshold=args.threshold, workers=args.workers)
    for r in rows:
        log.info("sigma=%g lg_edges=%d components=%d large=%d %.2fs",
                 r.sigma, r.lg_edges, r.components, r.large_components, r.seconds)
    with staged_output(args.output) as tmp:
        with open(tmp / "sweep.csv", "w") as fh:
            analysis.write_sweep_csv(rows, fh)
        params = {"sigmas": sigmas, "similarity": sim.name, "slack_ratio": sim.slack_ratio,
                  "slack_offset": sim.slack_offset, "threshold": args.threshold,
                  "time_unit": args.time_unit, "prefix": args.prefix, "full": args.full}
        write_manifest(tmp, "sweep", params, _inputs(args))
    return EXIT_OK


def write_labels(H, C: Clustering, path: Path) -> None:
    with open(path, "w") as fh:
        for eid, lab in zip(H.edge_ids, C.labels.tolist()):
            fh.write(f"{eid}\t{lab}\n")


def read_labels(path, H) -> Clustering:
    """Read ``edge_id<TAB>label`` rows; every edge of ``H`` needs exactly one label."""
    index = {eid: k for k, eid in enumerate(H.edge_ids)}
    labels = np.full(H.n_edges, OUTLIER, np.int64)
    seen = np.zeros(H.n_edges, bool)
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            try:
                eid, lab = parts[0], int(parts[1])
                if len(parts) != 2:
                    raise ValueError
            except (ValueError, IndexError):
                raise SchemaError("expected 'edge_id<TAB>label'", lineno) from None
            if eid not in index:
                raise SchemaError(f"unknown edge id {eid!r}", lineno)
            if seen[index[eid]]:
                raise SchemaError(f"edge id {eid!r} labeled twice", lineno)
            if lab < OUTLIER:
                raise SchemaError(f"bad label {lab}", lineno)
            labels[index[eid]], seen[index[eid]] = lab, True
    if not seen.all():
        raise InputError(f"{path}: labels missing for {int((~seen).sum())} edges")
    k = int(labels.max(initial=OUTLIER)) + 1
    return Clustering(labels, np.zeros(k), np.arange(k))


def cmd_stats(args) -> int:
    resolve(args, ["prefix", "time_unit", "bin_width"])
    H, _ = read_hypergraph(args)
    H = normalize_times(H, args.time_unit)
    C = read_labels(args.labels, H)
    reports = analysis.cluster_stats(H, C)
    proj = analysis.project_to_vertices(H, C)
    div = analysis.topic_diversity(H, C)
    with staged_output(args.output) as tmp:
        with open(tmp / "report.json", "w") as fh:
            analysis.write_report_json(reports, fh)
        with open(tmp / "projection.tsv", "w") as fh:
            analysis.write_projection_tsv(H, proj, fh)
        with open(tmp / "topics.csv", "w") as fh:
            fh.write("cluster,size,unique_subjects,unique_categories\n")
            for row in div.rows:
                fh.write(",".join(map(str, row)) + "\n")
        summ = analysis.summary(H, C, reports, proj)
        summ.update({"global_subjects": div.global_subjects, "global_categories": div.global_categories})
        (tmp / "summary.json").write_text(json.dumps(summ, indent=1) + "\n")
        hist = {
            "edge_sizes": {str(k): v for k, v in edge_size_histogram(H).items()},
            "edge_times": {str(k): v for k, v in edge_time_histogram(H, args.bin_width).items()},
            "bin_width": args.bin_width,
        }
        (tmp / "histograms.json").write_text(json.dumps(hist, indent=1) + "\n")
        write_manifest(tmp, "stats", {"prefix": args.prefix, "time_unit": args.time_unit,
                                      "bin_width": args.bin_width},
                       _inputs(args) + [Path(args.labels)])
    return EXIT_OK


def cmd_export_distances(args) -> int:
    resolve(args, ["prefix", "time_unit", "kind"])
    H, _ = read_hypergraph(args)
    H = normalize_times(H, args.time_unit)
    C = read_labels(args.labels, H)
    ids, D = analysis.distribution_matrix(analysis.cluster_stats(H, C), args.kind)
    with staged_output(args.output) as tmp:
        with open(tmp / "distances.csv", "w") as fh:
            analysis.write_distances_csv(ids, D, fh)
        write_manifest(tmp, "export-distances", {"kind": args.kind, "prefix": args.prefix},
                       _inputs(args) + [Path(args.labels)])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="edgeclust", description="Temporal hyperedge clustering")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--backend", choices=kernels.BACKENDS, help="kernel backend (default: numba)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, needs_time=True):
        sp.add_argument("input", help="JSON Lines hypergraph (or edges.csv with --incidence)")
        sp.add_argument("-o", "--output", required=True, help="output directory")
        sp.add_argument("--incidence", help="incidence.csv for the two-file CSV input form")
        sp.add_argument("--config", help="key=value file; command-line flags take precedence")
        sp.add_argument("--prefix", help="drop vertices whose name starts with this (default 'n/a')")
        sp.add_argument("--no-clean", dest="prefix", action="store_const", const="",
                        help="skip vertex-prefix cleaning")
        if needs_time:
            sp.add_argument("--time-unit", choices=["days", "seconds", "months"])

    def clustering_opts(sp):
        sp.add_argument("--similarity", choices=["jaccard", "simplicial", "size_filtered"])
        sp.add_argument("--slack-ratio", type=float)
        sp.add_argument("--slack-offset", type=float)
        sp.add_argument("--min-cluster-size", type=int)
        sp.add_argument("--workers", type=int)

    sp = sub.add_parser("ingest", help="parse and clean a raw dataset")
    common(sp, needs_time=False)
    sp.set_defaults(func=cmd_ingest)

    sp = sub.add_parser("cluster", help="cluster hyperedges")
    common(sp)
    clustering_opts(sp)
    sp.add_argument("--sigma", type=float, help="time-kernel width (required)")
    sp.add_argument("--max-degree", type=int, help="skip vertices of higher degree when finding pairs")
    sp.add_argument("--allow-single-root", action="store_true")
    sp.add_argument("--per-component-roots", action="store_true",
                    help="treat every line-graph component as its own unselectable root")
    sp.add_argument("--dump-linegraph", action="store_true")
    sp.add_argument("--dump-dendrogram", action="store_true")
    sp.add_argument("--dump-condensed", action="store_true")
    sp.set_defaults(func=cmd_cluster)

    sp = sub.add_parser("sweep", help="line-graph diagnostics over several sigmas")
    common(sp)
    clustering_opts(sp)
    sp.add_argument("--sigmas", required=True, help="ascending list, e.g. 30,360 or 100:800:100")
    sp.add_argument("--threshold", type=int, help="large-component size threshold (default 10)")
    sp.add_argument("--full", action="store_true", help="also run the full clustering per sigma")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("stats", help="cluster statistics for an existing labeling")
    common(sp)
    sp.add_argument("--labels", required=True)
    sp.add_argument("--bin-width", type=float, help="edge-time histogram bin width (default 30)")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("export-distances", help="pairwise Hellinger distances between clusters")
    common(sp)
    sp.add_argument("--labels", required=True)
    sp.add_argument("--kind", choices=["topics", "authors"])
    sp.set_defaults(func=cmd_export_distances)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s", stream=sys.stderr)
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        if args.backend:
            kernels.use(args.backend)
        if getattr(args, "workers", None) is not None and args.workers < 1:
            raise ParameterError("--workers must be >= 1")
        return args.func(args)
    except InputError as exc:
        log.error("input error: %s", exc)
        return EXIT_INPUT
    except ParameterError as exc:
        log.error("parameter error: %s", exc)
        return EXIT_PARAM
    except FileNotFoundError as exc:
        log.error("input error: %s", exc)
        return EXIT_INPUT
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
