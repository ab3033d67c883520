"""Produce real engine CSVs once per session through the engine CLI.

The plots package consumes the engine only through files and its command
line, so the fixtures below shell out to ``posnerspin`` rather than import
it.  Time grids are shortened; the file shapes are what matters here.
"""

import subprocess
import sys

import pytest

ENGINE = [sys.executable, "-m", "posnerspin.cli"]


def engine_run(*argv: str) -> str:
    proc = subprocess.run(
        [*ENGINE, *argv], capture_output=True, text=True, check=True
    )
    return proc.stdout


@pytest.fixture(scope="session")
def preset_names() -> list[str]:
    lines = engine_run("list-presets").strip().splitlines()
    return [line.split(":", 1)[0] for line in lines]


@pytest.fixture(scope="session")
def engine_outdir(tmp_path_factory, preset_names):
    outdir = tmp_path_factory.mktemp("engine_csv")
    for name in preset_names:
        argv = ["run", "--preset", name, "--out", str(outdir), "--jobs", "1"]
        if not name.endswith("_table") and name != "transition_spectrum":
            argv += ["--set", "time.n_points=41"]
        engine_run(*argv)
    return outdir
