from django.core.management import call_command

from vlaforge.manifest import Manifest, file_sha256, manifest_path


def generate(tmp_path):
    out = tmp_path / "spatial.jsonl"
    call_command("gen_spatial", synthetic=4, per_scene=2, out=out, seed=5)
    return out


def test_read_returns_what_was_written(tmp_path):
    out = generate(tmp_path)
    manifest = Manifest.read(manifest_path(out))
    assert manifest.global_seed == 5
    [entry] = manifest.outputs
    assert entry.path == out.name
    assert entry.schema == "spatial"
    assert entry.sha256 == file_sha256(out)
    assert entry.count == len(out.read_text(encoding="utf-8").splitlines())


def test_verify_passes_untouched_output(tmp_path):
    out = generate(tmp_path)
    assert Manifest.read(manifest_path(out)).verify(tmp_path) == []


def test_verify_names_tampered_output(tmp_path):
    out = generate(tmp_path)
    text = out.read_text(encoding="utf-8")
    out.write_text(text.replace('"answer":"', '"answer":"x', 1), encoding="utf-8")
    assert Manifest.read(manifest_path(out)).verify(tmp_path) == [out.name]


def test_verify_names_missing_output(tmp_path):
    out = generate(tmp_path)
    out.unlink()
    assert Manifest.read(manifest_path(out)).verify(tmp_path) == [out.name]


def test_directory_manifest_covers_every_output(tmp_path):
    manifest = Manifest.start(0, command=["forge"])
    for name in ("a.jsonl", "b.md"):
        (tmp_path / name).write_text("{}\n", encoding="utf-8")
    manifest.add_output(tmp_path / "a.jsonl", schema="run_report")
    manifest.add_output(tmp_path / "b.md")
    manifest.write(manifest_path(tmp_path))

    (tmp_path / "b.md").write_text("changed\n", encoding="utf-8")
    assert Manifest.read(tmp_path / "manifest.json").verify(tmp_path) == ["b.md"]
