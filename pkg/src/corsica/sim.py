"""Deterministic browser stand-in.

Evaluates subfeature checks against stored file bytes with the same
semantics a standards-compliant browser exposes cross-origin: image
dimensions are readable, applied style directives are observable on probe
elements, and included scripts surface their global symbols. Evaluation
reuses the extractors, which keeps the simulator and the feature vectors
consistent by construction; real-engine quirks are the runtime's problem
and feed back through normalization.
"""

from __future__ import annotations

import json
from pathlib import Path

from .corpus import ServiceFileSet, load_file_set
from .errors import SchemaError
from .extract import extract_feature
from .features import Subfeature
from .plan import ProbePlan, ScanReport, Target, TargetResult
from .tree import (
    MATCH,
    MISMATCH,
    DecisionTree,
    FeatureCheck,
    InternalNode,
    LeafNode,
)

__all__ = [
    "compat_oracle",
    "evaluate",
    "evaluate_check",
    "identify",
    "load_network",
    "run_plan",
]

_SUBFEATURE_FILETYPE = {
    "ImageDimension": "image",
    "CssDirective": "css",
    "JsSymbol": "js",
}


def evaluate(fileset: ServiceFileSet, sub: Subfeature, path: str) -> str:
    """MATCH iff probing `path` on this service would verify `sub`.

    An absent file or a file of the wrong type is a mismatch (onerror, an
    unstyled probe element, or an undefined symbol). Script symbol checks
    compare values and source hashes only when the check carries them.
    """
    entry = fileset.get(path)
    if entry is None:
        return MISMATCH
    wanted = _SUBFEATURE_FILETYPE[type(sub).__name__]
    if entry.filetype != wanted:
        return MISMATCH
    feature = extract_feature(path, entry.filetype, entry.content)
    if feature is None:
        return MISMATCH
    for observed in feature.subfeatures:
        if type(observed) is not type(sub):
            continue
        if wanted == "image":
            if (observed.width, observed.height) == (sub.width, sub.height):
                return MATCH
        elif wanted == "css":
            if (observed.selector_kind, observed.selector_name,
                    observed.property, observed.expected_value) == (
                    sub.selector_kind, sub.selector_name,
                    sub.property, sub.expected_value):
                return MATCH
        else:
            if (observed.name, observed.symbol_kind) != (sub.name, sub.symbol_kind):
                continue
            if (sub.expected_value is not None
                    and observed.expected_value != sub.expected_value):
                continue
            if (sub.source_hash is not None
                    and observed.source_hash != sub.source_hash):
                continue
            return MATCH
    return MISMATCH


def evaluate_check(fileset: ServiceFileSet, check: FeatureCheck,
                   corp_blocking: bool = False) -> str:
    """A check matches when every one of its subfeatures matches.

    With corp_blocking the modeled servers send Cross-Origin-Resource-
    Policy on everything, so the browser drops every resource and every
    evaluation degrades to mismatch.
    """
    if corp_blocking:
        return MISMATCH
    for sub in check.checks:
        if evaluate(fileset, sub, check.path) == MISMATCH:
            return MISMATCH
    return MATCH


def compat_oracle(fileset: ServiceFileSet):
    """Default normalization oracle: the simulator's own semantics."""

    def oracle(path: str, filetype: str, sub: Subfeature) -> bool:
        return evaluate(fileset, sub, path) == MATCH

    return oracle


def identify(fileset: ServiceFileSet, tree: DecisionTree,
             corp_blocking: bool = False) -> dict:
    """Walk the tree against one service; returns cluster and hop outcomes.

    After reaching a leaf, the leaf's confirmation checks are replayed;
    if any fails, the probed service is not a corpus member and the
    cluster is only the nearest neighborhood (caveat flag). Confirmation
    replays are corpus-side bookkeeping and do not count as requests.
    """
    node = tree.root
    path_taken: list[tuple[str, str]] = []
    while isinstance(node, InternalNode):
        outcome = evaluate_check(fileset, node.check, corp_blocking)
        path_taken.append((node.check.path, outcome))
        node = node.on_match if outcome == MATCH else node.on_mismatch
    assert isinstance(node, LeafNode)
    caveat = any(
        evaluate_check(fileset, confirm, corp_blocking) == MISMATCH
        for confirm in node.confirm
    )
    return {
        "cluster": [s.token() for s in node.cluster],
        "path_taken": path_taken,
        "caveat": caveat,
    }


def run_plan(network: dict[tuple[str, int], ServiceFileSet | None],
             plan: ProbePlan, corp_blocking: bool = False) -> ScanReport:
    """Execute a plan against a modeled network.

    Absent targets fail discovery after the modeled timeout; present ones
    are identified by walking the embedded tree. requests_used counts the
    identification hops only (counts_discovery stays false).
    """
    results = []
    for target in plan.targets:
        fileset = network.get((target.host, target.port))
        if fileset is None:
            results.append(TargetResult(
                target=target,
                alive=False,
                errors=[
                    f"discovery probe {plan.discovery_probe_path} timed out "
                    f"after {plan.discovery_timeout_ms} ms"
                ],
            ))
            continue
        outcome = identify(fileset, plan.tree, corp_blocking)
        results.append(TargetResult(
            target=target,
            alive=True,
            path_taken=outcome["path_taken"],
            cluster=outcome["cluster"],
            requests_used=len(outcome["path_taken"]),
            caveat=outcome["caveat"],
        ))
    return ScanReport(results=results, counts_discovery=False)


def load_network(path: str | Path) -> dict[tuple[str, int], ServiceFileSet]:
    """Network fixture: JSON map "host:port" -> file-set directory.

    Relative directories resolve against the fixture file's location.
    """
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read network fixture {path}: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("network fixture must be a JSON object")
    network: dict[tuple[str, int], ServiceFileSet] = {}
    for key, ref in obj.items():
        host, _, port = key.rpartition(":")
        if not host or not port.isdigit():
            raise SchemaError(f"bad network key: {key!r}")
        if ref is None:
            continue
        ref_path = Path(ref)
        if not ref_path.is_absolute():
            ref_path = path.parent / ref_path
        network[(host, int(port))] = load_file_set(ref_path)
    return network
