import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corsica.corpus import ServiceId
from corsica.errors import SchemaError
from corsica.extract import build_feature_vector
from corsica.store import (
    CorpusDb,
    VulnRecord,
    annotate_vulns,
    cluster_vuln_summary,
    load_db,
    parse_version,
    save_db,
    version_in_range,
    version_key,
    vulns_for_cluster,
)

from synth import reference_corpus


def make_db():
    return CorpusDb(vectors=[build_feature_vector(fs) for fs in reference_corpus()])


def test_parse_version():
    assert parse_version("4.7.6") == ((4, 7, 6), "")
    assert parse_version("1") == ((1,), "")
    assert parse_version("1.2.3.4") == ((1, 2, 3, 4), "")
    assert parse_version("2.0-rc1") == ((2, 0), "-rc1")
    with pytest.raises(ValueError):
        parse_version("beta")


def test_version_ordering_missing_segments_are_zero():
    assert version_key("1.2") == version_key("1.2.0.0")
    assert version_key("1.2") < version_key("1.2.1")
    assert version_key("1.10") > version_key("1.9")


def test_version_suffix_breaks_ties_lexicographically():
    assert version_key("1.2.0") < version_key("1.2.0-rc1")
    assert version_key("1.2.0-alpha") < version_key("1.2.0-beta")


def test_version_in_range_half_open():
    assert version_in_range("1.2.5", "1.2.0", "1.3.0")
    assert version_in_range("1.2.0", "1.2.0", "1.3.0")
    assert not version_in_range("1.3.0", "1.2.0", "1.3.0")
    assert not version_in_range("", "1.0", "2.0")  # unversioned never matches


def _oracle_version_tuple(version: str) -> tuple:
    """Independent comparison oracle: pad by string-splitting, not parsing."""
    import re
    m = re.match(r"^(\d+(?:\.\d+){0,3})(.*)$", version)
    nums = [int(x) for x in m.group(1).split(".")]
    while len(nums) < 4:
        nums.append(0)
    return tuple(nums), m.group(2)


def _random_version(rng):
    parts = [str(rng.randrange(0, 20)) for _ in range(rng.randrange(1, 5))]
    suffix = rng.choice(["", "", "", "-rc1", "-beta", "a"])
    return ".".join(parts) + suffix


def test_containment_agrees_with_brute_force_oracle():
    rng = random.Random(99)
    for _ in range(2000):
        v = _random_version(rng)
        a, b = _random_version(rng), _random_version(rng)
        if _oracle_version_tuple(a) >= _oracle_version_tuple(b):
            continue
        expected = (_oracle_version_tuple(a) <= _oracle_version_tuple(v)
                    < _oracle_version_tuple(b))
        assert version_in_range(v, a, b) == expected, (v, a, b)


def test_vuln_record_rejects_empty_range():
    with pytest.raises(ValueError):
        VulnRecord("a", "b", "", "2.0", "2.0", "xss")
    with pytest.raises(ValueError):
        VulnRecord("a", "b", "", "2.1", "2.0", "xss")


def test_vuln_record_rejects_unknown_class():
    with pytest.raises(ValueError):
        VulnRecord("a", "b", "", "1.0", "2.0", "dos")


def test_save_load_roundtrip(tmp_path):
    db = make_db()
    db, _ = annotate_vulns(db, [
        VulnRecord("typo3", "typo3", "", "4.0", "4.7.7", "xss", "ref-1"),
    ])
    path = tmp_path / "db.json"
    save_db(db, path)
    loaded = load_db(path)
    assert loaded.to_json() == db.to_json()


def test_save_determinism(tmp_path):
    db = make_db()
    one, two = tmp_path / "a.json", tmp_path / "b.json"
    save_db(db, one)
    save_db(db, two)
    assert one.read_bytes() == two.read_bytes()


def test_load_rejects_wrong_schema_version(tmp_path):
    path = tmp_path / "db.json"
    path.write_text('{"schema_version": 99, "vectors": []}')
    with pytest.raises(SchemaError):
        load_db(path)


def test_annotate_dangling(tmp_path):
    db = make_db()
    present = VulnRecord("typo3", "typo3", "", "4.0", "5.0", "rce")
    absent = VulnRecord("ghost", "ware", "", "1.0", "2.0", "sqli")
    db, dangling = annotate_vulns(db, [present, absent])
    assert dangling == [absent]
    assert len(db.vulns) == 2


def test_vulns_for_cluster_range_boundaries():
    db = make_db()
    db, _ = annotate_vulns(db, [
        VulnRecord("wordpress", "wordpress", "", "4.9.7", "4.9.8", "xss", "r"),
    ])
    cluster = [
        ServiceId("wordpress", "wordpress", "4.9.6"),
        ServiceId("wordpress", "wordpress", "4.9.7"),
        ServiceId("wordpress", "wordpress", "4.9.8"),
    ]
    pairs = vulns_for_cluster(db, cluster)
    assert [s.token() for s, _ in pairs] == ["wordpress:wordpress:4.9.7"]


def test_cluster_straddling_fix_boundary_is_partial():
    db = make_db()
    db, _ = annotate_vulns(db, [
        VulnRecord("wordpress", "wordpress", "", "4.0", "4.9.8", "rce"),
    ])
    straddling = [
        ServiceId("wordpress", "wordpress", "4.9.7"),
        ServiceId("wordpress", "wordpress", "4.9.8"),
    ]
    summary = cluster_vuln_summary(db, straddling)
    assert not summary["actionable"]
    assert summary["matched"] == ["wordpress:wordpress:4.9.7"]

    inside = [
        ServiceId("wordpress", "wordpress", "4.9.6"),
        ServiceId("wordpress", "wordpress", "4.9.7"),
    ]
    assert cluster_vuln_summary(db, inside)["actionable"]


def test_empty_cluster():
    db = make_db()
    assert vulns_for_cluster(db, []) == []
    assert not cluster_vuln_summary(db, [])["actionable"]


def test_component_must_match():
    db = CorpusDb(vectors=[build_feature_vector(fs) for fs in reference_corpus()])
    db, _ = annotate_vulns(db, [
        VulnRecord("wordpress", "wordpress", "contact-form", "1.0", "2.0", "xss"),
    ])
    whole_service = [ServiceId("wordpress", "wordpress", "1.5")]
    assert vulns_for_cluster(db, whole_service) == []


@given(st.lists(st.integers(0, 30), min_size=1, max_size=4),
       st.lists(st.integers(0, 30), min_size=1, max_size=4))
def test_version_key_total_order_consistent(a_parts, b_parts):
    a = ".".join(map(str, a_parts))
    b = ".".join(map(str, b_parts))
    ka, kb = version_key(a), version_key(b)
    assert (ka < kb) == (not kb <= ka)
