import pytest

from corsica.corpus import (
    ServiceFileSet,
    ServiceId,
    corpus_stats,
    filetype_for_path,
    ingest_firmware_root,
    ingest_install_tree,
    load_file_set,
    save_file_set,
)
from corsica.errors import IngestError, WebrootNotFoundError

from synth import make_fileset


def test_service_id_token_roundtrip():
    sid = ServiceId("wordpress", "wordpress", "4.9.8")
    assert sid.token() == "wordpress:wordpress:4.9.8"
    assert ServiceId.from_token(sid.token()) == sid
    plugin = ServiceId("wordpress", "wordpress", "4.9.8", "akismet")
    assert ServiceId.from_token(plugin.token()) == plugin


def test_service_id_unversioned_device():
    sid = ServiceId("acme", "camera")
    assert sid.token() == "acme:camera:"
    assert ServiceId.from_token("acme:camera:") == sid


def test_service_id_rejects_bad_versions():
    with pytest.raises(ValueError):
        ServiceId("a", "b", "not.a.version")
    with pytest.raises(ValueError):
        ServiceId("a", "b", ".1")
    ServiceId("a", "b", "1.2.3.4")  # four segments are fine
    ServiceId("a", "b", "1.2.3-rc1")  # suffix token is fine


def test_filetype_table():
    assert filetype_for_path("a/b/logo.PNG") == "image"
    assert filetype_for_path("style.css") == "css"
    assert filetype_for_path("app.mjs") == "js"
    assert filetype_for_path("index.php") == "other"
    assert filetype_for_path("noext") == "other"
    assert filetype_for_path("sprite.gif?v=2") == "image"


def test_web_path_validation():
    fs = ServiceFileSet(ServiceId("a", "b", "1"), "install")
    with pytest.raises(ValueError):
        fs.add("/leading/slash.css", b"")
    with pytest.raises(ValueError):
        fs.add("up/../escape.css", b"")


def test_ingest_install_tree_nested_js_path(tmp_path):
    # deep nested asset paths must survive ingestion verbatim
    (tmp_path / "wp-includes/js/crop").mkdir(parents=True)
    (tmp_path / "wp-login.php").write_bytes(b"<?php\n")
    (tmp_path / "wp-includes/js/crop/cropper.js").write_bytes(b"var x = 1;\n")
    fs = ingest_install_tree(tmp_path, ServiceId("wordpress", "wordpress", "2.9"))
    assert len(fs) == 2
    assert fs.get("wp-includes/js/crop/cropper.js").filetype == "js"
    assert fs.get("wp-login.php").filetype == "other"
    assert fs.provenance == "install"


def test_ingest_install_tree_empty(tmp_path):
    fs = ingest_install_tree(tmp_path, ServiceId("a", "b", "1"))
    assert len(fs) == 0


def test_ingest_install_tree_nested_paths_match_walk(tmp_path):
    # oracle: an independent filesystem walk produces the same path list
    (tmp_path / "a/b").mkdir(parents=True)
    (tmp_path / "a/b/c.png").write_bytes(b"x")
    (tmp_path / "top.css").write_bytes(b"")
    fs = ingest_install_tree(tmp_path, ServiceId("a", "b", "1"))
    walked = sorted(
        p.relative_to(tmp_path).as_posix()
        for p in tmp_path.rglob("*") if p.is_file()
    )
    assert fs.paths() == walked
    assert fs.get("a/b/c.png").filetype == "image"


def test_ingest_missing_root(tmp_path):
    with pytest.raises(IngestError):
        ingest_install_tree(tmp_path / "nope", ServiceId("a", "b", "1"))


def test_ingest_skips_symlinks(tmp_path):
    (tmp_path / "real.css").write_bytes(b"p{}")
    (tmp_path / "alias.css").symlink_to(tmp_path / "real.css")
    fs = ingest_install_tree(tmp_path, ServiceId("a", "b", "1"))
    assert fs.paths() == ["real.css"]


def test_firmware_webroot_candidates(tmp_path):
    (tmp_path / "www").mkdir()
    (tmp_path / "www/index.html").write_bytes(b"<html>")
    fs = ingest_firmware_root(tmp_path, ServiceId("acme", "cam", "1.0"))
    assert fs.paths() == ["index.html"]
    assert fs.provenance == "firmware"


def test_firmware_webroot_hint_wins(tmp_path):
    (tmp_path / "www").mkdir()
    (tmp_path / "usr/local/htdocs").mkdir(parents=True)
    (tmp_path / "usr/local/htdocs/app.js").write_bytes(b"var a = 1;")
    fs = ingest_firmware_root(
        tmp_path, ServiceId("acme", "cam", "1.0"),
        webroot_hint="/usr/local/htdocs",
    )
    assert fs.paths() == ["app.js"]


def test_firmware_no_webroot_is_an_error(tmp_path):
    (tmp_path / "etc").mkdir()
    with pytest.raises(WebrootNotFoundError):
        ingest_firmware_root(tmp_path, ServiceId("acme", "cam", "1.0"))


def test_corpus_stats_counts():
    fs = make_fileset(ServiceId("a", "b", "1"), {
        "a.js": b"", "b.js": b"", "c.css": b"",
    })
    hist = corpus_stats([fs])
    assert hist == {".js": 2, ".css": 1}
    assert sum(hist.values()) == len(fs)


def test_corpus_stats_empty():
    assert corpus_stats([]) == {}


def test_corpus_stats_table1_ordering():
    # histogram ordering by count must put .php first for the file-type
    # distribution typical of large web-service corpora
    table1 = {
        ".php": 1792301, ".gif": 657480, ".png": 434389, ".js": 380695,
        ".css": 152453, ".yml": 146461, ".html": 144020, ".rst": 135629,
        ".xml": 81685, ".svg": 71222,
    }
    ordered = sorted(table1.items(), key=lambda kv: (-kv[1], kv[0]))
    assert ordered[0][0] == ".php"
    assert [ext for ext, _ in ordered[:3]] == [".php", ".gif", ".png"]


def test_save_load_roundtrip_and_idempotence(tmp_path):
    fs = make_fileset(ServiceId("a", "b", "1.2"), {
        "x/y.css": b"#a { color: red }",
        "logo.png": b"\x89PNG\r\n\x1a\nrest",
        "query.gif?v=9": b"GIF89a88",
    })
    out1 = tmp_path / "one"
    out2 = tmp_path / "two"
    save_file_set(fs, out1)
    save_file_set(fs, out2)
    assert (out1 / "manifest.json").read_bytes() == (out2 / "manifest.json").read_bytes()

    loaded = load_file_set(out1)
    assert loaded.service == fs.service
    assert loaded.provenance == fs.provenance
    assert loaded.paths() == fs.paths()
    for path in fs.paths():
        assert loaded.get(path).content == fs.get(path).content
        assert loaded.get(path).filetype == fs.get(path).filetype


def test_ingest_idempotence(tmp_path):
    src = tmp_path / "src"
    (src / "sub").mkdir(parents=True)
    (src / "sub/app.js").write_bytes(b"var v = 3;")
    (src / "logo.gif").write_bytes(b"GIF89a")
    sid = ServiceId("a", "b", "1")
    one = ingest_install_tree(src, sid)
    two = ingest_install_tree(src, sid)
    d1, d2 = tmp_path / "d1", tmp_path / "d2"
    save_file_set(one, d1)
    save_file_set(two, d2)
    assert (d1 / "manifest.json").read_bytes() == (d2 / "manifest.json").read_bytes()
