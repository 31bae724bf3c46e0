"""Command-line interface: flags, summary lines, error lines, exit codes."""

import subprocess
import sys

import numpy as np
import pytest

from fdsl.cli import main
from fdsl.pipeline import read_manifest, read_png
from fdsl.registry import read_registry

from test_pipeline import tree_hashes

FAST = ["--size", "64", "--dots", "5000"]


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_kv(line: str) -> dict:
    return dict(tok.split("=", 1) for tok in line.split() if "=" in tok)


def test_search_writes_registry(tmp_path, capsys):
    out = tmp_path / "params.csv"
    code, stdout, _ = run(capsys, "search", "--categories", "3",
                          "--seed", "5", "--out", str(out))
    assert code == 0
    kv = parse_kv(stdout)
    assert kv["command"] == "search" and kv["categories"] == "3"
    seed, render, specs = read_registry(out)
    assert seed == 5 and len(specs) == 3
    assert (render.width, render.point_count) == (512, 100_000)


def test_search_timeout_error_line(tmp_path, capsys):
    code, _, stderr = run(capsys, "search", "--categories", "1000",
                          "--rmin", "0.45", "--rmax", "0.5",
                          "--max-attempts", "300",
                          "--out", str(tmp_path / "p.csv"))
    assert code == 1
    kv = parse_kv(stderr)
    assert kv["code"] == "search-timeout"
    assert kv["attempts"] == "300"
    assert int(kv["accepted"]) < 1000


def test_generate_and_stats(tmp_path, capsys):
    code, stdout, _ = run(capsys, "generate", "--categories", "2",
                          "--instances", "3", *FAST, "--seed", "9",
                          "--out", str(tmp_path))
    assert code == 0
    kv = parse_kv(stdout)
    assert kv["images"] == "6"
    root = tmp_path / "fractal-2"
    assert read_manifest(root / "manifest.csv").digest == kv["digest"]

    code, stdout, _ = run(capsys, "stats", str(root))
    assert code == 0
    st = parse_kv(stdout.replace("\n", " "))
    assert st["family"] == "fractal"
    assert st["images"] == "6"
    assert st["digest"] == kv["digest"]
    assert 0.05 <= float(st["fill_min"]) <= float(st["fill_max"]) <= 0.25


def test_stats_error_on_missing_dataset(tmp_path, capsys):
    code, _, stderr = run(capsys, "stats", str(tmp_path))
    assert code == 1
    assert parse_kv(stderr)["code"] == "integrity"


def test_generate_workers_flag_same_bytes(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("FDSL_WORKERS", raising=False)
    for workers, sub in (("1", "a"), ("3", "b")):
        code, _, _ = run(capsys, "generate", "--categories", "2",
                         "--instances", "4", *FAST, "--seed", "3",
                         "--workers", workers, "--out", str(tmp_path / sub))
        assert code == 0
    assert tree_hashes(tmp_path / "a" / "fractal-2") == \
        tree_hashes(tmp_path / "b" / "fractal-2")


def test_workers_env_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("FDSL_WORKERS", "2")
    code, _, _ = run(capsys, "generate", "--categories", "1",
                     "--instances", "2", *FAST, "--seed", "3",
                     "--workers", "1", "--out", str(tmp_path / "env"))
    assert code == 0
    monkeypatch.delenv("FDSL_WORKERS")
    code, _, _ = run(capsys, "generate", "--categories", "1",
                     "--instances", "2", *FAST, "--seed", "3",
                     "--workers", "1", "--out", str(tmp_path / "flag"))
    assert code == 0
    assert tree_hashes(tmp_path / "env" / "fractal-1") == \
        tree_hashes(tmp_path / "flag" / "fractal-1")


@pytest.mark.parametrize("family", ["bezier", "perlin"])
def test_baseline_subcommand(tmp_path, capsys, family):
    code, stdout, _ = run(capsys, "baseline", family, "--categories", "2",
                          "--instances", "2", *FAST, "--out", str(tmp_path))
    assert code == 0
    root = tmp_path / f"{family}-2"
    assert parse_kv(stdout)["images"] == "4"
    head = (root / "params.csv").read_text().splitlines()[0]
    assert head.endswith(f"family={family}")
    img = read_png(root / "00000" / "00000_0000.png")
    assert set(np.unique(img)) <= {0, 127}


def test_generate_family_flag_matches_baseline(tmp_path, capsys):
    code, _, _ = run(capsys, "baseline", "perlin", "--categories", "2",
                     "--instances", "2", *FAST, "--out", str(tmp_path / "a"))
    assert code == 0
    code, _, _ = run(capsys, "generate", "--family", "perlin",
                     "--categories", "2", "--instances", "2", *FAST,
                     "--out", str(tmp_path / "b"))
    assert code == 0
    assert tree_hashes(tmp_path / "a" / "perlin-2") == \
        tree_hashes(tmp_path / "b" / "perlin-2")


def test_explore_generates_named_outputs(tmp_path, capsys):
    code, stdout, _ = run(capsys, "explore", "--axis", "patch_mode",
                          "--values", "point,patch-fix",
                          "--categories", "2", "--instances", "2", *FAST,
                          "--out", str(tmp_path))
    assert code == 0
    lines = stdout.strip().splitlines()
    assert len(lines) == 2
    assert (tmp_path / "patch_mode=point" / "manifest.csv").is_file()
    assert (tmp_path / "patch_mode=patch-fix" / "manifest.csv").is_file()
    a = read_png(tmp_path / "patch_mode=point" / "00000" / "00000_0000.png")
    b = read_png(tmp_path / "patch_mode=patch-fix" / "00000" / "00000_0000.png")
    assert np.count_nonzero(a) < np.count_nonzero(b)


def test_explore_rejects_bad_axis(tmp_path, capsys):
    code, _, stderr = run(capsys, "explore", "--axis", "bogus",
                          "--values", "1", "--out", str(tmp_path))
    assert code == 1
    assert parse_kv(stderr)["code"] == "invalid-axis"
    code, _, stderr = run(capsys, "explore", "--axis", "image_size",
                          "--values", "100", "--out", str(tmp_path))
    assert code == 1
    assert parse_kv(stderr)["code"] == "invalid-axis"


def test_bench_reports_throughput(capsys):
    code, stdout, _ = run(capsys, "bench", "--images", "3", *FAST)
    assert code == 0
    kv = parse_kv(stdout)
    assert kv["command"] == "bench"
    assert float(kv["images_per_sec"]) > 0
    assert float(kv["ms_per_image"]) > 0


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "fdsl.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("search", "generate", "stats", "explore", "baseline", "bench"):
        assert sub in proc.stdout
