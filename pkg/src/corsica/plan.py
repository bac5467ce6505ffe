"""Probe plans and scan reports.

A ProbePlan is the self-contained unit handed to an executor (the
simulator or the in-browser runtime): targets, discovery settings, the
serialized decision tree and request limits. A ScanReport is what comes
back. Both forms are plain JSON so the browser side needs no decoder.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import PlanError, SchemaError
from .tree import DecisionTree, tree_from_json, tree_to_json

__all__ = [
    "PlanLimits",
    "ProbePlan",
    "ScanReport",
    "Target",
    "TargetResult",
    "emit_plan",
    "emit_probe_page",
    "parse_report",
    "plan_from_json",
]

PLAN_SCHEMA_VERSION = 1
REPORT_SCHEMA_VERSION = 1

DEFAULT_PROBE_PATH = "/favicon.ico"
DEFAULT_DISCOVERY_TIMEOUT_MS = 3000
DEFAULT_CHECK_TIMEOUT_MS = 3000
DEFAULT_MAX_PARALLEL_CHECKS = 6

_RUNTIME_RESOURCE = "probe_runtime.js"


@dataclass(frozen=True)
class Target:
    host: str
    port: int
    scheme: str = "http"

    def origin(self) -> str:
        return f"{self.scheme}://{self.host}:{self.port}"

    def to_json(self) -> dict:
        return {"host": self.host, "port": self.port, "scheme": self.scheme}

    @classmethod
    def from_json(cls, obj: dict) -> "Target":
        return cls(obj["host"], int(obj["port"]), obj.get("scheme", "http"))


@dataclass(frozen=True)
class PlanLimits:
    max_parallel_checks: int = DEFAULT_MAX_PARALLEL_CHECKS
    per_check_timeout_ms: int = DEFAULT_CHECK_TIMEOUT_MS

    def __post_init__(self) -> None:
        if self.per_check_timeout_ms <= 0:
            raise ValueError("per_check_timeout_ms must be positive")
        if self.max_parallel_checks <= 0:
            raise ValueError("max_parallel_checks must be positive")


@dataclass
class ProbePlan:
    targets: list[Target]
    tree: DecisionTree
    discovery_timeout_ms: int = DEFAULT_DISCOVERY_TIMEOUT_MS
    discovery_probe_path: str = DEFAULT_PROBE_PATH
    limits: PlanLimits = field(default_factory=PlanLimits)

    def __post_init__(self) -> None:
        if self.discovery_timeout_ms <= 0:
            raise ValueError("discovery timeout must be positive")

    def to_json(self) -> dict:
        return {
            "schema_version": PLAN_SCHEMA_VERSION,
            "targets": [t.to_json() for t in self.targets],
            "discovery": {
                "timeout_ms": self.discovery_timeout_ms,
                "probe_path": self.discovery_probe_path,
            },
            "tree": tree_to_json(self.tree),
            "limits": {
                "max_parallel_checks": self.limits.max_parallel_checks,
                "per_check_timeout_ms": self.limits.per_check_timeout_ms,
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def plan_from_json(obj: dict) -> ProbePlan:
    if obj.get("schema_version") != PLAN_SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported plan schema_version: {obj.get('schema_version')!r}"
        )
    discovery = obj.get("discovery", {})
    limits = obj.get("limits", {})
    return ProbePlan(
        targets=[Target.from_json(t) for t in obj["targets"]],
        tree=tree_from_json(obj["tree"]),
        discovery_timeout_ms=discovery.get(
            "timeout_ms", DEFAULT_DISCOVERY_TIMEOUT_MS),
        discovery_probe_path=discovery.get("probe_path", DEFAULT_PROBE_PATH),
        limits=PlanLimits(
            max_parallel_checks=limits.get(
                "max_parallel_checks", DEFAULT_MAX_PARALLEL_CHECKS),
            per_check_timeout_ms=limits.get(
                "per_check_timeout_ms", DEFAULT_CHECK_TIMEOUT_MS),
        ),
    )


def emit_plan(tree: DecisionTree, targets: list[Target],
              limits: PlanLimits | None = None, *,
              discovery_timeout_ms: int = DEFAULT_DISCOVERY_TIMEOUT_MS,
              discovery_probe_path: str = DEFAULT_PROBE_PATH) -> ProbePlan:
    return ProbePlan(
        targets=list(targets),
        tree=tree,
        discovery_timeout_ms=discovery_timeout_ms,
        discovery_probe_path=discovery_probe_path,
        limits=limits or PlanLimits(),
    )


# ---------------------------------------------------------------------------
# Scan reports
# ---------------------------------------------------------------------------

@dataclass
class TargetResult:
    target: Target
    alive: bool
    path_taken: list[tuple[str, str]] = field(default_factory=list)
    cluster: list[str] = field(default_factory=list)  # service tokens
    requests_used: int = 0
    errors: list[str] = field(default_factory=list)
    caveat: bool = False  # leaf confirmation failed: nearest match only

    def to_json(self) -> dict:
        return {
            "host": self.target.host,
            "port": self.target.port,
            "scheme": self.target.scheme,
            "alive": self.alive,
            "path_taken": [[p, o] for p, o in self.path_taken],
            "cluster": list(self.cluster),
            "requests_used": self.requests_used,
            "errors": list(self.errors),
            "caveat": self.caveat,
        }


@dataclass
class ScanReport:
    results: list[TargetResult]
    counts_discovery: bool = False

    def to_json(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "counts_discovery": self.counts_discovery,
            "targets": [r.to_json() for r in self.results],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def parse_report(data: bytes | str) -> ScanReport:
    """Validate and load a scan report; inconsistent reports are rejected."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"report is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError("report must be a JSON object")
    if obj.get("schema_version") != REPORT_SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported report schema_version: {obj.get('schema_version')!r}"
        )
    counts_discovery = bool(obj.get("counts_discovery", False))
    results = []
    for entry in obj.get("targets", []):
        path_taken = []
        for hop in entry.get("path_taken", []):
            if (not isinstance(hop, (list, tuple)) or len(hop) != 2
                    or hop[1] not in ("match", "mismatch")):
                raise SchemaError(f"malformed path_taken entry: {hop!r}")
            path_taken.append((hop[0], hop[1]))
        requests_used = entry.get("requests_used", 0)
        expected = len(path_taken) + (1 if counts_discovery else 0)
        if requests_used != expected:
            raise SchemaError(
                f"requests_used={requests_used} inconsistent with "
                f"{len(path_taken)} hops (counts_discovery={counts_discovery})"
            )
        results.append(TargetResult(
            target=Target.from_json(entry),
            alive=bool(entry["alive"]),
            path_taken=path_taken,
            cluster=list(entry.get("cluster", [])),
            requests_used=requests_used,
            errors=list(entry.get("errors", [])),
            caveat=bool(entry.get("caveat", False)),
        ))
    return ScanReport(results=results, counts_discovery=counts_discovery)


# ---------------------------------------------------------------------------
# Probe page emission
# ---------------------------------------------------------------------------

_PAGE_TEMPLATE = """<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>network health check</title>
</head>
<body>
<div id="probe-status">checking...</div>
<script>
window.PROBE_PLAN = {plan_json};
window.REPORT_URL = {report_url_json};
</script>
<script>
{runtime}
</script>
</body>
</html>
"""


def default_runtime_path() -> Path:
    return Path(str(resources.files("corsica").joinpath("runtime", _RUNTIME_RESOURCE)))


def emit_probe_page(plan: ProbePlan, report_url: str,
                    runtime_source: str | None = None) -> str:
    """Render one self-contained HTML page that executes the plan.

    The page embeds the plan JSON and the runtime bundle inline; its only
    external origins are the targets themselves and report_url. Output is
    byte-stable for equal inputs.
    """
    if runtime_source is None:
        path = default_runtime_path()
        if not path.is_file():
            raise PlanError(
                f"probe runtime bundle not found at {path}; build the "
                "frontend or pass runtime_source explicitly"
            )
        runtime_source = path.read_text(encoding="utf-8")
    # </script> inside the JSON payload would terminate the script block
    plan_json = json.dumps(plan.to_json(), sort_keys=True).replace("</", "<\\/")
    return _PAGE_TEMPLATE.format(
        plan_json=plan_json,
        report_url_json=json.dumps(report_url),
        runtime=runtime_source,
    )


def read_targets_file(path: str | Path) -> list[Target]:
    """Targets, one per line: [scheme://]host:port; '#' starts a comment."""
    targets = []
    for raw_line in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        scheme = "http"
        if "://" in line:
            scheme, _, line = line.partition("://")
        host, _, port = line.rpartition(":")
        if not host or not port.isdigit():
            raise PlanError(f"bad target line: {raw_line!r}")
        targets.append(Target(host=host, port=int(port), scheme=scheme))
    return targets
