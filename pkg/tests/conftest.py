import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

# Deterministic suite: derandomized hypothesis, generous deadlines for CI.
settings.register_profile(
    "det",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("det")

sys.path.insert(0, str(Path(__file__).parent))

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def pipeline_dir(tmp_path_factory) -> Path:
    """Full CLI pipeline over the bundled fixture, run once per session."""
    from actionscope.cli import main

    out = tmp_path_factory.mktemp("pipeline")
    labeled = str(DATA_DIR / "fixture_labeled.ndjson")
    stream = str(DATA_DIR / "fixture_stream.ndjson")
    steps = [
        ["lexicon", labeled, "--min-count", "25", "--min-score", "1.0",
         "--out", str(out / "lexicon.txt")],
        ["train", labeled, "--lexicon", str(out / "lexicon.txt"), "--seed", "7",
         "--out", str(out / "bundle")],
        ["classify", stream, "--bundle", str(out / "bundle"),
         "--out", str(out / "classified.ndjson")],
        ["explain", str(out / "classified.ndjson"), "--bundle", str(out / "bundle"),
         "--mode", "all-modes", "--out", str(out / "shifts.json")],
        ["cluster", str(out / "classified.ndjson"), "--eps-m", "150",
         "--min-pts", "3", "--out", str(out / "clusters.json")],
        ["series", str(out / "classified.ndjson"), "--out", str(out / "series.json"),
         "--tsv", str(out / "series.tsv")],
        ["counties", str(out / "classified.ndjson"),
         "--boundaries", str(DATA_DIR / "fixture_counties.geojson"),
         "--out", str(out / "counties.json"), "--tsv", str(out / "counties.tsv")],
    ]
    for argv in steps:
        assert main(argv) == 0, f"pipeline step failed: {argv[0]}"
    return out
