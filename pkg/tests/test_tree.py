import hashlib
import json
import random

import pytest

from corsica.corpus import ServiceId
from corsica.errors import EmptyCorpusError
from corsica.extract import build_feature_vector
from corsica.features import ImageDimension, subfeature_key
from corsica.tree import (
    MATCH,
    MISMATCH,
    FeatureCheck,
    InternalNode,
    LeafNode,
    TreeConfig,
    build_tree,
    check_outcome,
    equivalence_classes,
    iter_leaves,
    tree_from_json,
    tree_metrics,
    tree_to_json,
    walk_tree,
)

from synth import (
    BTN_SPRITE_PATH,
    CROPPER_PATH,
    SEARCHFIELD_PATH,
    reference_corpus,
    make_fileset,
    make_image_bytes,
    random_corpus,
)


def vectors_of(corpus):
    return [build_feature_vector(fs) for fs in corpus]


def partition_of_leaves(tree):
    return {
        frozenset(s.token() for s in leaf.cluster)
        for leaf in iter_leaves(tree.root)
    }


def partition_of_classes(classes):
    return {frozenset(s.token() for s in cluster) for cluster in classes}


# ---------------------------------------------------------------------------
# check_outcome
# ---------------------------------------------------------------------------

def test_typo3_vector_vs_wordpress_check(reference_vectors):
    typo3 = next(v for v in reference_vectors if v.service.version == "4.7.6")
    wordpress = next(v for v in reference_vectors if v.service.vendor == "wordpress")
    cropper_feature = wordpress.feature_at(CROPPER_PATH)
    check = FeatureCheck(CROPPER_PATH, "js", tuple(cropper_feature.subfeatures))
    assert check_outcome(typo3, check) == MISMATCH

    sprite_feature = typo3.feature_at(BTN_SPRITE_PATH)
    sprite_check = FeatureCheck(BTN_SPRITE_PATH, "image",
                                tuple(sprite_feature.subfeatures))
    assert check_outcome(typo3, sprite_check) == MATCH


def test_absent_path_is_mismatch(reference_vectors):
    check = FeatureCheck("no/such/file.png", "image", (ImageDimension(1, 1),))
    for vector in reference_vectors:
        assert check_outcome(vector, check) == MISMATCH


def test_partial_subfeature_failure_is_mismatch(reference_vectors):
    typo3 = next(v for v in reference_vectors if v.service.version == "4.7.6")
    sprite = typo3.feature_at(BTN_SPRITE_PATH).subfeatures[0]
    check = FeatureCheck(BTN_SPRITE_PATH, "image",
                         (sprite, ImageDimension(9999, 1)))
    assert check_outcome(typo3, check) == MISMATCH


# ---------------------------------------------------------------------------
# equivalence classes
# ---------------------------------------------------------------------------

def test_identical_filesets_cluster_together():
    files = {"logo.png": make_image_bytes("png", 4, 4)}
    corpus = [
        make_fileset(ServiceId("v", "p", "1.0"), files),
        make_fileset(ServiceId("v", "p", "1.1"), files),
    ]
    classes = equivalence_classes(vectors_of(corpus))
    assert partition_of_classes(classes) == {frozenset({"v:p:1.0", "v:p:1.1"})}


def test_differing_dimension_splits():
    corpus = [
        make_fileset(ServiceId("v", "p", "1.0"),
                     {"logo.png": make_image_bytes("png", 4, 4)}),
        make_fileset(ServiceId("v", "p", "1.1"),
                     {"logo.png": make_image_bytes("png", 4, 5)}),
    ]
    classes = equivalence_classes(vectors_of(corpus))
    assert len(classes) == 2


def _hash_grouping_oracle(vectors):
    """Independent partition: group by canonical verified-subfeature form."""
    groups = {}
    for vector in vectors:
        form = sorted(
            (f.path, sorted(subfeature_key(s) for s in f.verified_subfeatures()))
            for f in vector.features if f.verified_subfeatures()
        )
        digest = hashlib.sha256(json.dumps(form).encode()).hexdigest()
        groups.setdefault(digest, []).append(vector.service.token())
    return {frozenset(members) for members in groups.values()}


def test_equivalence_matches_hash_grouping_oracle():
    rng = random.Random(5)
    for _ in range(10):
        vectors = vectors_of(random_corpus(rng, n_services=10))
        classes = partition_of_classes(equivalence_classes(vectors))
        assert classes == _hash_grouping_oracle(vectors)


# ---------------------------------------------------------------------------
# build_tree
# ---------------------------------------------------------------------------

def test_reference_tree_structure(reference_tree):
    root = reference_tree.root
    assert isinstance(root, InternalNode)
    assert root.check.path == CROPPER_PATH

    wp_leaf = root.on_match
    assert isinstance(wp_leaf, LeafNode)
    assert {s.vendor for s in wp_leaf.cluster} == {"wordpress"}
    assert len(wp_leaf.cluster) == 3

    sprite_node = root.on_mismatch
    assert isinstance(sprite_node, InternalNode)
    assert sprite_node.check.path == BTN_SPRITE_PATH

    search_node = sprite_node.on_match
    assert isinstance(search_node, InternalNode)
    assert search_node.check.path == SEARCHFIELD_PATH
    assert [s.token() for s in search_node.on_match.cluster] == ["typo3:typo3:4.7.6"]
    assert [s.token() for s in search_node.on_mismatch.cluster] == ["typo3:typo3:4.6.0"]

    joomla_leaf = sprite_node.on_mismatch
    assert [s.token() for s in joomla_leaf.cluster] == ["joomla:joomla:3.9.0"]


def test_single_service_tree_is_leaf():
    corpus = [make_fileset(ServiceId("v", "p", "1"),
                           {"a.png": make_image_bytes("png", 2, 2)})]
    vectors = vectors_of(corpus)
    tree = build_tree(vectors)
    assert isinstance(tree.root, LeafNode)
    metrics = tree_metrics(tree, vectors)
    assert (metrics.min_path_length, metrics.max_path_length) == (0, 0)


def test_two_disjoint_services_depth_one():
    corpus = [
        make_fileset(ServiceId("v", "a", "1"),
                     {"a.png": make_image_bytes("png", 2, 2)}),
        make_fileset(ServiceId("v", "b", "1"),
                     {"b.png": make_image_bytes("png", 3, 3)}),
    ]
    vectors = vectors_of(corpus)
    # every candidate in the 1-node space separates the pair
    for vector in vectors:
        for feature in vector.features:
            check = FeatureCheck(feature.path, feature.filetype,
                                 tuple(feature.subfeatures))
            outcomes = {v.service.token(): check_outcome(v, check) for v in vectors}
            assert sorted(outcomes.values()) == [MATCH, MISMATCH]
    tree = build_tree(vectors)
    assert isinstance(tree.root, InternalNode)
    assert isinstance(tree.root.on_match, LeafNode)
    assert isinstance(tree.root.on_mismatch, LeafNode)
    assert all(len(leaf.cluster) == 1 for leaf in iter_leaves(tree.root))


def test_empty_corpus_is_an_error():
    with pytest.raises(EmptyCorpusError):
        build_tree([])


def test_multivalued_same_path_distinctions():
    # three services differ only in the dimensions of one shared path, so
    # separating them requires testing that path with different expected
    # values along one walk
    corpus = [
        make_fileset(ServiceId("v", "p", f"1.{i}"),
                     {"logo.gif": make_image_bytes("gif", i + 1, i + 1)})
        for i in range(3)
    ]
    vectors = vectors_of(corpus)
    tree = build_tree(vectors)
    assert partition_of_leaves(tree) == partition_of_classes(
        equivalence_classes(vectors))
    # no walk may repeat an identical check
    def assert_no_repeated_check(node, seen):
        if isinstance(node, LeafNode):
            return
        key = json.dumps(node.check.to_json(), sort_keys=True)
        assert key not in seen
        assert_no_repeated_check(node.on_match, seen | {key})
        assert_no_repeated_check(node.on_mismatch, seen | {key})
    assert_no_repeated_check(tree.root, frozenset())


def test_leaf_partition_equals_equivalence_classes_randomized():
    rng = random.Random(42)
    for _ in range(8):
        vectors = vectors_of(random_corpus(rng))
        tree = build_tree(vectors)
        assert partition_of_leaves(tree) == partition_of_classes(
            equivalence_classes(vectors))


def test_partition_consistency_after_normalization():
    # with all style directives normalized away, construction and the
    # equivalence oracle must both ignore them and still agree
    from corsica.extract import normalize_vector
    from corsica.features import CssDirective

    def reject_css(path, filetype, sub):
        return not isinstance(sub, CssDirective)

    rng = random.Random(13)
    for _ in range(4):
        vectors = [normalize_vector(v, reject_css)
                   for v in vectors_of(random_corpus(rng, n_services=14))]
        tree = build_tree(vectors)
        assert partition_of_leaves(tree) == partition_of_classes(
            equivalence_classes(vectors))
        for node_check in _all_checks(tree.root):
            assert node_check.filetype != "css"
        for vector in vectors:
            leaf, _ = walk_tree(tree, lambda c: check_outcome(vector, c))
            assert vector.service in leaf.cluster


def _all_checks(node):
    if isinstance(node, LeafNode):
        return
    yield node.check
    yield from _all_checks(node.on_match)
    yield from _all_checks(node.on_mismatch)


def test_soundness_every_service_reaches_its_own_leaf():
    rng = random.Random(43)
    for _ in range(5):
        vectors = vectors_of(random_corpus(rng))
        tree = build_tree(vectors)
        for vector in vectors:
            leaf, _ = walk_tree(
                tree, lambda check: check_outcome(vector, check))
            assert vector.service in leaf.cluster


def test_determinism_byte_identical():
    rng1, rng2 = random.Random(77), random.Random(77)
    v1 = vectors_of(random_corpus(rng1))
    v2 = vectors_of(random_corpus(rng2))
    t1 = json.dumps(tree_to_json(build_tree(v1)), sort_keys=True)
    t2 = json.dumps(tree_to_json(build_tree(v2)), sort_keys=True)
    assert t1 == t2


def test_max_depth_truncates():
    rng = random.Random(3)
    vectors = vectors_of(random_corpus(rng, n_services=12))
    tree = build_tree(vectors, TreeConfig(max_depth=1))

    def depth(node):
        if isinstance(node, LeafNode):
            return 0
        return 1 + max(depth(node.on_match), depth(node.on_mismatch))

    assert depth(tree.root) <= 1
    # every service still lands somewhere
    total = sum(len(leaf.cluster) for leaf in iter_leaves(tree.root))
    assert total == len(vectors)


def test_balanced_corpus_log_bound():
    # 8 mutually distinguishable services built from 3 presence bits
    markers = [f"m{j}.png" for j in range(3)]
    marker_bytes = [make_image_bytes("png", 10 + j, 10) for j in range(3)]
    corpus = []
    for i in range(8):
        files = {markers[j]: marker_bytes[j] for j in range(3) if i >> j & 1}
        corpus.append(make_fileset(ServiceId("v", "p", f"0.{i}"), files))
    vectors = vectors_of(corpus)
    tree = build_tree(vectors)
    metrics = tree_metrics(tree, vectors)
    assert metrics.leaf_count == 8
    assert metrics.max_path_length == 3  # perfectly balanced
    assert float(metrics.avg_path_length) <= 2 * 3


def test_metrics_partition_2_2_1_1():
    shared_a = {"a.png": make_image_bytes("png", 1, 2)}
    shared_b = {"b.png": make_image_bytes("png", 3, 4)}
    corpus = [
        make_fileset(ServiceId("v", "p", "1.0"), shared_a),
        make_fileset(ServiceId("v", "p", "1.1"), shared_a),
        make_fileset(ServiceId("v", "p", "2.0"), shared_b),
        make_fileset(ServiceId("v", "p", "2.1"), shared_b),
        make_fileset(ServiceId("v", "p", "3.0"),
                     {"c.png": make_image_bytes("png", 5, 6)}),
        make_fileset(ServiceId("v", "p", "4.0"),
                     {"d.png": make_image_bytes("png", 7, 8)}),
    ]
    vectors = vectors_of(corpus)
    tree = build_tree(vectors)
    metrics = tree_metrics(tree, vectors)
    assert metrics.service_count == 6
    assert metrics.leaf_count == 4
    assert metrics.unique_leaves == 2
    assert float(metrics.avg_cluster_size) == 1.5
    assert metrics.min_path_length <= metrics.max_path_length
    sizes = sorted(len(leaf.cluster) for leaf in iter_leaves(tree.root))
    assert sizes == [1, 1, 2, 2]


def test_tree_serialization_roundtrip(reference_tree, reference_vectors):
    obj = tree_to_json(reference_tree)
    restored = tree_from_json(obj)
    assert tree_to_json(restored) == obj
    # identical walks for every corpus vector
    for vector in reference_vectors:
        leaf_a, path_a = walk_tree(
            reference_tree, lambda c: check_outcome(vector, c))
        leaf_b, path_b = walk_tree(
            restored, lambda c: check_outcome(vector, c))
        assert path_a == path_b
        assert [s.token() for s in leaf_a.cluster] == [
            s.token() for s in leaf_b.cluster]


def test_path_length_bounded_by_distinct_checks():
    rng = random.Random(8)
    vectors = vectors_of(random_corpus(rng, n_services=20))
    tree = build_tree(vectors)
    distinct_checks = {
        json.dumps(FeatureCheck(f.path, f.filetype,
                                tuple(f.verified_subfeatures()[:5])).to_json(),
                   sort_keys=True)
        for v in vectors for f in v.features if f.verified_subfeatures()
    }
    metrics = tree_metrics(tree, vectors)
    assert metrics.max_path_length <= len(distinct_checks)


def test_tighter_subfeature_cap_only_coarsens():
    # with fewer subfeatures per check than the vectors carry, the tree
    # may lose distinctions but must never split an equivalence class
    rng = random.Random(21)
    vectors = vectors_of(random_corpus(rng, n_services=16))
    tree = build_tree(vectors, TreeConfig(max_subfeatures=1))
    classes = partition_of_classes(equivalence_classes(vectors))
    for leaf in iter_leaves(tree.root):
        members = {s.token() for s in leaf.cluster}
        covered = {cls for cls in classes if cls & members}
        assert members == set().union(*covered)
    for vector in vectors:
        leaf, _ = walk_tree(tree, lambda c: check_outcome(vector, c))
        assert vector.service in leaf.cluster


def test_frequency_weights_steer_ties():
    # two services, one distinguishing file each; weighting one service
    # heavily must pull its check to the root's match side
    a_files = {"a.png": make_image_bytes("png", 2, 2)}
    b_files = {"b.png": make_image_bytes("png", 3, 3)}
    corpus = [
        make_fileset(ServiceId("v", "a", "1"), a_files),
        make_fileset(ServiceId("v", "b", "1"), b_files),
    ]
    vectors = vectors_of(corpus)
    heavy_b = build_tree(vectors, TreeConfig(weights=(("v:b:1", 10.0),)))
    assert heavy_b.root.check.path == "b.png"
    heavy_a = build_tree(vectors, TreeConfig(weights=(("v:a:1", 10.0),)))
    assert heavy_a.root.check.path == "a.png"
