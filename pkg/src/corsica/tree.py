"""Decision-tree compilation over normalized feature vectors.

Each internal node requests one file and tests one set of subfeatures;
match and mismatch branches narrow the candidate set until a leaf holds a
cluster of services no constructible check can tell apart. Construction
is greedy: the check splitting the remaining services closest to half
wins, so identification cost grows roughly with log2 of the corpus size
instead of linearly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .corpus import ServiceId
from .errors import EmptyCorpusError, SchemaError
from .features import (
    CssDirective,
    FeatureVector,
    ImageDimension,
    JsSymbol,
    Subfeature,
    subfeature_from_json,
)

__all__ = [
    "DecisionNode",
    "DecisionTree",
    "FeatureCheck",
    "InternalNode",
    "LeafNode",
    "TreeConfig",
    "TreeMetrics",
    "build_tree",
    "check_outcome",
    "equivalence_classes",
    "tree_from_json",
    "tree_metrics",
    "tree_to_json",
    "walk_tree",
]

TREE_SCHEMA_VERSION = 1

MATCH = "match"
MISMATCH = "mismatch"


@dataclass(frozen=True)
class FeatureCheck:
    """One probe: request `path`, verify every subfeature in `checks`."""

    path: str
    filetype: str
    checks: tuple[Subfeature, ...]

    def __post_init__(self) -> None:
        if not self.checks:
            raise ValueError("a feature check needs at least one subfeature")

    def to_json(self) -> dict:
        return {
            "path": self.path,
            "type": self.filetype,
            "checks": [c.to_json() for c in self.checks],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FeatureCheck":
        return cls(
            obj["path"], obj["type"],
            tuple(subfeature_from_json(c) for c in obj["checks"]),
        )


@dataclass
class InternalNode:
    check: FeatureCheck
    on_match: "DecisionNode"
    on_mismatch: "DecisionNode"


@dataclass
class LeafNode:
    cluster: tuple[ServiceId, ...]
    # capped feature checks of one cluster member; a probe that reaches
    # this leaf but fails any of them is flagged "nearest, not in corpus"
    confirm: tuple[FeatureCheck, ...] = ()

    def __post_init__(self) -> None:
        if not self.cluster:
            raise ValueError("leaf cluster may not be empty")


DecisionNode = InternalNode | LeafNode


@dataclass(frozen=True)
class TreeConfig:
    max_subfeatures: int = 5
    max_depth: int = 32
    # corpus-frequency weights by service token; unlisted services weigh 1
    weights: tuple[tuple[str, float], ...] = ()

    def weight_map(self) -> dict[str, float]:
        return dict(self.weights)


@dataclass
class DecisionTree:
    root: DecisionNode
    config: TreeConfig = field(default_factory=TreeConfig)


@dataclass(frozen=True)
class TreeMetrics:
    service_count: int
    leaf_count: int
    unique_leaves: int
    avg_cluster_size: Fraction
    min_path_length: int
    avg_path_length: Fraction
    max_path_length: int

    def to_json(self) -> dict:
        return {
            "service_count": self.service_count,
            "leaf_count": self.leaf_count,
            "unique_leaves": self.unique_leaves,
            "avg_cluster_size": float(self.avg_cluster_size),
            "min_path_length": self.min_path_length,
            "avg_path_length": float(self.avg_path_length),
            "max_path_length": self.max_path_length,
        }


# ---------------------------------------------------------------------------
# Check satisfaction
# ---------------------------------------------------------------------------

class _VectorIndex:
    """Per-vector lookup tables for fast subfeature satisfaction tests."""

    def __init__(self, vector: FeatureVector) -> None:
        self.images: dict[str, set[tuple[int, int]]] = {}
        self.css: dict[str, set[tuple[str, str, str, str]]] = {}
        self.js: dict[str, dict[tuple[str, str], tuple[str | None, str | None]]] = {}
        for feature in vector.features:
            verified = feature.verified_subfeatures()
            if not verified:
                continue
            if feature.filetype == "image":
                self.images[feature.path] = {
                    (s.width, s.height) for s in verified
                }
            elif feature.filetype == "css":
                self.css[feature.path] = {
                    (s.selector_kind, s.selector_name, s.property, s.expected_value)
                    for s in verified
                }
            else:
                self.js[feature.path] = {
                    (s.name, s.symbol_kind): (s.expected_value, s.source_hash)
                    for s in verified
                }

    def satisfies(self, path: str, sub: Subfeature) -> bool:
        if isinstance(sub, ImageDimension):
            return (sub.width, sub.height) in self.images.get(path, ())
        if isinstance(sub, CssDirective):
            key = (sub.selector_kind, sub.selector_name, sub.property,
                   sub.expected_value)
            return key in self.css.get(path, ())
        symbols = self.js.get(path)
        if not symbols:
            return False
        entry = symbols.get((sub.name, sub.symbol_kind))
        if entry is None:
            return False
        value, source_hash = entry
        if sub.expected_value is not None and value != sub.expected_value:
            return False
        if sub.source_hash is not None and source_hash != sub.source_hash:
            return False
        return True

    def satisfies_check(self, check: FeatureCheck) -> bool:
        return all(self.satisfies(check.path, sub) for sub in check.checks)


def check_outcome(vector: FeatureVector, check: FeatureCheck) -> str:
    """MATCH iff the vector's file at check.path satisfies every subfeature.

    A missing file is a mismatch: the probe sees onerror, an unstyled
    element, or an undefined symbol.
    """
    return MATCH if _VectorIndex(vector).satisfies_check(check) else MISMATCH


# ---------------------------------------------------------------------------
# Equivalence classes (brute force over constructible checks)
# ---------------------------------------------------------------------------

def _constructible_subfeatures(vector: FeatureVector):
    """Every (path, subfeature) check constructible from a vector.

    Includes the existence-weakened form of script symbols: a check may
    test a symbol's presence without pinning its value or source hash.
    """
    for feature in vector.features:
        for sub in feature.verified_subfeatures():
            yield feature.path, sub
            if isinstance(sub, JsSymbol) and (
                sub.expected_value is not None or sub.source_hash is not None
            ):
                yield feature.path, JsSymbol(sub.name, sub.symbol_kind)


def _equivalent(a: FeatureVector, ai: _VectorIndex,
                b: FeatureVector, bi: _VectorIndex) -> bool:
    for vector in (a, b):
        for path, sub in _constructible_subfeatures(vector):
            if ai.satisfies(path, sub) != bi.satisfies(path, sub):
                return False
    return True


def equivalence_classes(vectors: list[FeatureVector]) -> list[list[ServiceId]]:
    """Partition services by direct pairwise comparison of check outcomes.

    Two services are equivalent iff every constructible check answers the
    same for both. Quadratic, independent of tree construction; serves as
    its ground truth.
    """
    classes: list[tuple[FeatureVector, _VectorIndex, list[ServiceId]]] = []
    for vector in vectors:
        index = _VectorIndex(vector)
        for rep, rep_index, members in classes:
            if _equivalent(rep, rep_index, vector, index):
                members.append(vector.service)
                break
        else:
            classes.append((vector, index, [vector.service]))
    out = [sorted(members, key=lambda s: s.token()) for _, _, members in classes]
    return sorted(out, key=lambda cluster: cluster[0].token())


# ---------------------------------------------------------------------------
# Greedy construction
# ---------------------------------------------------------------------------

def _candidate_checks(vector: FeatureVector, max_subfeatures: int):
    """Distinct (path, capped verified subfeatures) checks a vector offers."""
    for feature in vector.features:
        verified = feature.verified_subfeatures()
        if verified:
            yield FeatureCheck(feature.path, feature.filetype,
                               tuple(verified[:max_subfeatures]))


def _check_sort_form(check: FeatureCheck) -> str:
    return json.dumps(check.to_json(), sort_keys=True)


def build_tree(vectors: list[FeatureVector], config: TreeConfig | None = None) -> DecisionTree:
    """Compile vectors into a decision tree.

    At each node the candidate check minimizing |matched - mismatched| is
    chosen; ties prefer (in order) the check whose match side carries more
    corpus-frequency weight, more subfeatures per request, then the
    lexicographically smaller path. Deterministic for equal inputs.
    """
    if not vectors:
        raise EmptyCorpusError("empty corpus")
    config = config or TreeConfig()
    weights = config.weight_map()
    uniform_weights = not weights

    indexes = [_VectorIndex(v) for v in vectors]
    service_weights = [weights.get(v.service.token(), 1.0) for v in vectors]

    # one global candidate table: key -> (check, bitmask of satisfying services)
    cand_info: dict[str, tuple[FeatureCheck, int]] = {}
    cands_by_service: list[list[str]] = []
    for vector in vectors:
        keys = []
        for check in _candidate_checks(vector, config.max_subfeatures):
            key = _check_sort_form(check)
            if key not in cand_info:
                mask = 0
                for i, index in enumerate(indexes):
                    if index.satisfies_check(check):
                        mask |= 1 << i
                cand_info[key] = (check, mask)
            keys.append(key)
        cands_by_service.append(keys)

    def make_leaf(members: list[int]) -> LeafNode:
        cluster = sorted((vectors[i].service for i in members),
                         key=lambda s: s.token())
        rep = min(members, key=lambda i: vectors[i].service.token())
        confirm = tuple(sorted(
            _candidate_checks(vectors[rep], config.max_subfeatures),
            key=lambda c: c.path,
        ))
        return LeafNode(cluster=tuple(cluster), confirm=confirm)

    def build_node(members: list[int], member_mask: int, depth: int) -> DecisionNode:
        if len(members) == 1 or depth >= config.max_depth:
            return make_leaf(members)
        keys = sorted({k for i in members for k in cands_by_service[i]})
        best_key = None
        best_sort = None
        for key in keys:
            check, mask = cand_info[key]
            matched = mask & member_mask
            n_match = matched.bit_count()
            n_mismatch = len(members) - n_match
            if n_match == 0 or n_mismatch == 0:
                continue
            if uniform_weights:
                match_weight = float(n_match)
            else:
                match_weight = sum(service_weights[i] for i in members
                                   if matched >> i & 1)
            sort_key = (
                abs(n_match - n_mismatch),
                -match_weight,
                -len(check.checks),
                check.path,
                key,
            )
            if best_sort is None or sort_key < best_sort:
                best_sort = sort_key
                best_key = key
        if best_key is None:
            # no check splits the set: one indistinguishable cluster
            return make_leaf(members)
        check, mask = cand_info[best_key]
        match_members = [i for i in members if mask >> i & 1]
        mismatch_members = [i for i in members if not mask >> i & 1]
        return InternalNode(
            check=check,
            on_match=build_node(match_members, mask & member_mask, depth + 1),
            on_mismatch=build_node(
                mismatch_members, member_mask & ~mask, depth + 1),
        )

    all_members = list(range(len(vectors)))
    root = build_node(all_members, (1 << len(vectors)) - 1, 0)
    return DecisionTree(root=root, config=config)


# ---------------------------------------------------------------------------
# Walking and metrics
# ---------------------------------------------------------------------------

def walk_tree(tree: DecisionTree, outcome_fn) -> tuple[LeafNode, list[tuple[str, str]]]:
    """Descend from the root; outcome_fn(check) -> MATCH | MISMATCH."""
    node = tree.root
    path_taken: list[tuple[str, str]] = []
    while isinstance(node, InternalNode):
        outcome = outcome_fn(node.check)
        path_taken.append((node.check.path, outcome))
        node = node.on_match if outcome == MATCH else node.on_mismatch
    return node, path_taken


def iter_leaves(node: DecisionNode):
    stack = [node]
    while stack:
        cur = stack.pop()
        if isinstance(cur, LeafNode):
            yield cur
        else:
            stack.append(cur.on_mismatch)
            stack.append(cur.on_match)


def tree_metrics(tree: DecisionTree, vectors: list[FeatureVector]) -> TreeMetrics:
    """Request-count statistics; a service's path length is the number of
    internal nodes between the root and its leaf."""
    if not vectors:
        raise EmptyCorpusError("empty corpus")
    leaves = list(iter_leaves(tree.root))
    lengths = []
    for vector in vectors:
        index = _VectorIndex(vector)
        _, path_taken = walk_tree(
            tree, lambda check: MATCH if index.satisfies_check(check) else MISMATCH
        )
        lengths.append(len(path_taken))
    return TreeMetrics(
        service_count=len(vectors),
        leaf_count=len(leaves),
        unique_leaves=sum(1 for leaf in leaves if len(leaf.cluster) == 1),
        avg_cluster_size=Fraction(len(vectors), len(leaves)),
        min_path_length=min(lengths),
        avg_path_length=Fraction(sum(lengths), len(lengths)),
        max_path_length=max(lengths),
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _node_to_json(node: DecisionNode) -> dict:
    if isinstance(node, LeafNode):
        out: dict = {"cluster": [s.token() for s in node.cluster]}
        if node.confirm:
            out["confirm"] = [c.to_json() for c in node.confirm]
        return out
    return {
        "check": node.check.to_json(),
        "match": _node_to_json(node.on_match),
        "mismatch": _node_to_json(node.on_mismatch),
    }


def _node_from_json(obj: dict) -> DecisionNode:
    if "cluster" in obj:
        return LeafNode(
            cluster=tuple(ServiceId.from_token(t) for t in obj["cluster"]),
            confirm=tuple(FeatureCheck.from_json(c)
                          for c in obj.get("confirm", [])),
        )
    return InternalNode(
        check=FeatureCheck.from_json(obj["check"]),
        on_match=_node_from_json(obj["match"]),
        on_mismatch=_node_from_json(obj["mismatch"]),
    )


def tree_to_json(tree: DecisionTree) -> dict:
    config: dict = {
        "max_subfeatures": tree.config.max_subfeatures,
        "max_depth": tree.config.max_depth,
    }
    if tree.config.weights:
        config["weights"] = {token: w for token, w in tree.config.weights}
    return {
        "schema_version": TREE_SCHEMA_VERSION,
        "config": config,
        "root": _node_to_json(tree.root),
    }


def tree_from_json(obj: dict) -> DecisionTree:
    if obj.get("schema_version") != TREE_SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported tree schema_version: {obj.get('schema_version')!r}"
        )
    config = obj.get("config", {})
    weights = tuple(sorted(config.get("weights", {}).items()))
    return DecisionTree(
        root=_node_from_json(obj["root"]),
        config=TreeConfig(
            max_subfeatures=config.get("max_subfeatures", 5),
            max_depth=config.get("max_depth", 32),
            weights=weights,
        ),
    )
