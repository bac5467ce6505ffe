"""Regenerate test/fixtures/reference_corpus.json from the toolchain fixtures.

The exported file carries a probe plan, per-target observable features
(what a browser would see at each path) and the simulator's expected
report, so the runtime's walk can be checked against the same ground
truth without a network.

Run from the repository root:
    python3 frontend/scripts/export_fixture.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(ROOT / "tests"))

from synth import reference_corpus  # noqa: E402

from corsica.extract import build_feature_vector  # noqa: E402
from corsica.plan import Target, emit_plan  # noqa: E402
from corsica.sim import run_plan  # noqa: E402
from corsica.tree import build_tree  # noqa: E402


def observations_for(fileset) -> dict:
    """Path -> what a probe observes there, keyed like the DOM executor."""
    vector = build_feature_vector(fileset)
    out = {}
    for feature in vector.features:
        if feature.filetype == "image":
            sub = feature.subfeatures[0]
            out[feature.path] = {
                "type": "image", "width": sub.width, "height": sub.height,
            }
        elif feature.filetype == "css":
            out[feature.path] = {
                "type": "css",
                "directives": [
                    {
                        "selector_kind": s.selector_kind,
                        "selector_name": s.selector_name,
                        "property": s.property,
                        "value": s.expected_value,
                    }
                    for s in feature.subfeatures
                ],
            }
        else:
            out[feature.path] = {
                "type": "js",
                "symbols": [
                    {
                        "name": s.name,
                        "kind": s.symbol_kind,
                        "value": s.expected_value,
                        "source_hash": s.source_hash,
                    }
                    for s in feature.subfeatures
                ],
            }
    return out


def main() -> None:
    corpus = reference_corpus()
    vectors = [build_feature_vector(fs) for fs in corpus]
    tree = build_tree(vectors)

    network = {}
    targets = []
    observations = {}
    for i, fileset in enumerate(corpus):
        host, port = f"10.0.0.{i + 1}", 80
        targets.append(Target(host, port))
        network[(host, port)] = fileset
        observations[f"{host}:{port}"] = observations_for(fileset)
    targets.append(Target("10.0.0.250", 80))  # dead host

    plan = emit_plan(tree, targets)
    expected = run_plan(network, plan)

    fixture = {
        "plan": plan.to_json(),
        "network": observations,
        "expected": expected.to_json(),
    }
    out = ROOT / "frontend" / "test" / "fixtures" / "reference_corpus.json"
    out.write_text(json.dumps(fixture, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
