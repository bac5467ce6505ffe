"""corsica command line: ingest -> extract -> build-tree -> emit/simulate.

Exit codes: 0 success, 1 usage error, 2 data error. Every subcommand is
deterministic for unchanged inputs, so reruns leave artifacts byte-equal.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .corpus import (
    ServiceId,
    corpus_stats,
    ingest_firmware_root,
    ingest_install_tree,
    load_corpus_dir,
    save_file_set,
)
from .crawl import CrawlLimits, crawl_live
from .errors import CorsicaError
from .extract import build_feature_vector, divergence_oracle, load_divergence_report, normalize_vector
from .plan import (
    PlanLimits,
    emit_plan,
    emit_probe_page,
    parse_report,
    plan_from_json,
    read_targets_file,
)
from .sim import compat_oracle, load_network, run_plan
from .store import (
    CorpusDb,
    annotate_vulns,
    cluster_vuln_summary,
    load_db,
    load_vuln_records,
    save_db,
)
from .tree import TreeConfig, build_tree, tree_from_json, tree_metrics, tree_to_json


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors exit 1, not 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _service_token(value: str) -> ServiceId:
    try:
        return ServiceId.from_token(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


def _write_json(path: str | Path, obj: dict) -> None:
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_ingest(args) -> int:
    service: ServiceId = args.service
    if args.kind == "install":
        fileset = ingest_install_tree(args.source, service)
    elif args.kind == "firmware":
        fileset = ingest_firmware_root(args.source, service,
                                       webroot_hint=args.webroot_hint)
    else:
        limits = CrawlLimits(max_pages=args.max_pages,
                             max_depth=args.max_depth,
                             same_host_only=not args.allow_other_hosts)
        fileset = crawl_live(args.source, service, limits=limits)
    out_dir = Path(args.out) / service.token().replace(":", "_")
    save_file_set(fileset, out_dir)
    _say(args, f"ingested {len(fileset)} files for {service.token()} -> {out_dir}")
    return 0


def cmd_extract(args) -> int:
    filesets = load_corpus_dir(args.corpus_dir)
    vectors = [build_feature_vector(fs) for fs in filesets]
    db = CorpusDb(vectors=vectors)
    save_db(db, args.out)
    total = sum(len(v.features) for v in vectors)
    _say(args, f"extracted {total} features over {len(vectors)} services -> {args.out}")
    return 0


def cmd_normalize(args) -> int:
    db = load_db(args.vectors)
    if args.oracle == "sim":
        if not args.corpus:
            raise CorsicaError("--oracle sim needs --corpus <dir> to re-evaluate files")
        filesets = {fs.service.token(): fs for fs in load_corpus_dir(args.corpus)}
        normalized = []
        for vector in db.vectors:
            fileset = filesets.get(vector.service.token())
            if fileset is None:
                raise CorsicaError(
                    f"no corpus files for {vector.service.token()}")
            normalized.append(normalize_vector(vector, compat_oracle(fileset)))
    else:
        report = load_divergence_report(args.oracle)
        normalized = [
            normalize_vector(vector, divergence_oracle(report, vector.service))
            for vector in db.vectors
        ]
    out = args.out or args.vectors
    save_db(CorpusDb(vectors=normalized, vulns=db.vulns,
                     metadata=dict(db.metadata)), out)
    dropped = sum(len(a.features) - len(b.features)
                  for a, b in zip(db.vectors, normalized))
    _say(args, f"normalized {len(normalized)} vectors ({dropped} features dropped) -> {out}")
    return 0


def cmd_build_tree(args) -> int:
    db = load_db(args.vectors)
    config = TreeConfig(max_subfeatures=args.max_subfeatures,
                        max_depth=args.max_depth)
    tree = build_tree(db.vectors, config)
    _write_json(args.out, tree_to_json(tree))
    _say(args, f"tree over {len(db.vectors)} services -> {args.out}")
    if args.metrics:
        metrics = tree_metrics(tree, db.vectors)
        print(f"services:          {metrics.service_count}")
        print(f"leaves:            {metrics.leaf_count}")
        print(f"unique leaves:     {metrics.unique_leaves}")
        print(f"avg cluster size:  {float(metrics.avg_cluster_size):.2f}")
        print(f"path length:       min={metrics.min_path_length} "
              f"avg={float(metrics.avg_path_length):.2f} "
              f"max={metrics.max_path_length}")
    return 0


def cmd_emit_plan(args) -> int:
    tree = tree_from_json(json.loads(Path(args.tree).read_text(encoding="utf-8")))
    targets = read_targets_file(args.targets)
    plan = emit_plan(
        tree, targets,
        PlanLimits(max_parallel_checks=args.max_parallel_checks,
                   per_check_timeout_ms=args.per_check_timeout),
        discovery_timeout_ms=args.discovery_timeout,
        discovery_probe_path=args.discovery_path,
    )
    _write_text(args.out, plan.dumps())
    _say(args, f"plan for {len(targets)} targets -> {args.out}")
    return 0


def cmd_emit_probe(args) -> int:
    plan = plan_from_json(json.loads(Path(args.plan).read_text(encoding="utf-8")))
    runtime_source = None
    if args.runtime:
        runtime_source = Path(args.runtime).read_text(encoding="utf-8")
    page = emit_probe_page(plan, args.report_url, runtime_source)
    _write_text(args.out, page)
    _say(args, f"probe page -> {args.out}")
    return 0


def cmd_simulate(args) -> int:
    plan = plan_from_json(json.loads(Path(args.plan).read_text(encoding="utf-8")))
    network = load_network(args.network)
    report = run_plan(network, plan, corp_blocking=args.corp_blocking)
    _write_text(args.out, report.dumps())
    parse_report(report.dumps())  # self-check the emitted schema
    if not args.quiet:
        unique = sum(1 for r in report.results
                     if r.alive and len(r.cluster) == 1 and not r.caveat)
        multiple = sum(1 for r in report.results
                       if r.alive and len(r.cluster) > 1 and not r.caveat)
        nomatch = len(report.results) - unique - multiple
        total = max(1, len(report.results))
        print("match     targets  percentage")
        print(f"Unique    {unique:7d}  {100 * unique // total}%")
        print(f"Multiple  {multiple:7d}  {100 * multiple // total}%")
        print(f"No        {nomatch:7d}  {100 * nomatch // total}%")
        print(f"Total     {len(report.results):7d}")
    return 0


def cmd_stats(args) -> int:
    filesets = load_corpus_dir(args.corpus_dir)
    hist = corpus_stats(filesets)
    print("filetype  files")
    for ext, count in sorted(hist.items(), key=lambda kv: (-kv[1], kv[0])):
        label = ext if ext else "(none)"
        print(f"{label:9s} {count}")
    print(f"total     {sum(hist.values())}")
    return 0


def cmd_vulns(args) -> int:
    db = load_db(args.db)
    if args.records:
        records = load_vuln_records(args.records)
        db, dangling = annotate_vulns(db, records)
        out = args.out or args.db
        save_db(db, out)
        _say(args, f"merged {len(records)} records "
                   f"({len(dangling)} dangling) -> {out}")
        for record in dangling:
            print(f"warning: no corpus entry for "
                  f"{record.vendor}:{record.product}"
                  f"{':' + record.component if record.component else ''}",
                  file=sys.stderr)
    if args.cluster:
        cluster = [ServiceId.from_token(t.strip())
                   for t in args.cluster.split(",") if t.strip()]
        summary = cluster_vuln_summary(db, cluster)
        for service, record in summary["pairs"]:
            print(f"{service.token()}  {record.vuln_class}  "
                  f"[{record.introduced}, {record.fixed})  {record.reference}")
        verdict = "actionable" if summary["actionable"] else "partial"
        print(f"cluster: {len(cluster)} members, "
              f"{len(summary['matched'])} vulnerable -> {verdict}")
    return 0


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------

def make_parser() -> _Parser:
    parser = _Parser(prog="corsica",
                     description="cross-origin web service identification toolchain")
    parser.add_argument("--version", action="version",
                        version=f"corsica {__version__}")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress progress output")
    parser.add_argument("--seed", type=int, default=None,
                        help="reserved; the pipeline is deterministic without it")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="build a service file set from a source")
    p.add_argument("source", help="directory (install/firmware) or URL (crawl)")
    p.add_argument("--kind", choices=("install", "firmware", "crawl"),
                   required=True)
    p.add_argument("--service", type=_service_token, required=True,
                   metavar="vendor:product:version[:component]")
    p.add_argument("--out", required=True, help="corpus directory")
    p.add_argument("--webroot-hint", default=None,
                   help="firmware only: webroot path inside the tree")
    p.add_argument("--max-pages", type=int, default=50)
    p.add_argument("--max-depth", type=int, default=5)
    p.add_argument("--allow-other-hosts", action="store_true")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("extract", help="extract feature vectors from a corpus")
    p.add_argument("corpus_dir")
    p.add_argument("--out", required=True, help="vectors.json path")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("normalize",
                       help="drop subfeatures a probe could not verify")
    p.add_argument("vectors", help="vectors.json path")
    p.add_argument("--oracle", required=True,
                   help="'sim' or a divergence report.json")
    p.add_argument("--corpus", default=None,
                   help="corpus dir (required with --oracle sim)")
    p.add_argument("--out", default=None, help="defaults to in-place")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("build-tree", help="compile vectors into a decision tree")
    p.add_argument("vectors", help="vectors.json path")
    p.add_argument("--out", required=True, help="tree.json path")
    p.add_argument("--metrics", action="store_true",
                   help="print request-count metrics")
    p.add_argument("--max-subfeatures", type=int, default=5)
    p.add_argument("--max-depth", type=int, default=32)
    p.set_defaults(func=cmd_build_tree)

    p = sub.add_parser("emit-plan", help="serialize a tree into a probe plan")
    p.add_argument("tree", help="tree.json path")
    p.add_argument("--targets", required=True, help="targets file, host:port per line")
    p.add_argument("--out", required=True, help="plan.json path")
    p.add_argument("--discovery-timeout", type=int, default=3000, metavar="MS")
    p.add_argument("--discovery-path", default="/favicon.ico")
    p.add_argument("--per-check-timeout", type=int, default=3000, metavar="MS")
    p.add_argument("--max-parallel-checks", type=int, default=6)
    p.set_defaults(func=cmd_emit_plan)

    p = sub.add_parser("emit-probe",
                       help="render the self-contained probe page")
    p.add_argument("plan", help="plan.json path")
    p.add_argument("--report-url", required=True)
    p.add_argument("--out", required=True, help="probe.html path")
    p.add_argument("--runtime", default=None,
                   help="probe runtime bundle (defaults to the packaged one)")
    p.set_defaults(func=cmd_emit_probe)

    p = sub.add_parser("simulate", help="execute a plan against a modeled network")
    p.add_argument("plan", help="plan.json path")
    p.add_argument("--network", required=True, help="network fixture json")
    p.add_argument("--out", required=True, help="report.json path")
    p.add_argument("--corp-blocking", action="store_true",
                   help="model Cross-Origin-Resource-Policy on every response")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("stats", help="file type histogram of a corpus")
    p.add_argument("corpus_dir")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("vulns", help="annotate and query vulnerability records")
    p.add_argument("db", help="corpus db json")
    p.add_argument("--records", default=None, help="vuln records json to merge")
    p.add_argument("--out", default=None, help="defaults to in-place")
    p.add_argument("--cluster", default=None,
                   help="comma-separated service tokens to query")
    p.set_defaults(func=cmd_vulns)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except CorsicaError as exc:
        print(f"corsica: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"corsica: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
