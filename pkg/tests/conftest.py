import pytest

from interleaving.syndrome import build_syndrome_graphs

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def graphs4():
    return build_syndrome_graphs(4)


@pytest.fixture
def record():
    """Log a one-line acceptance verdict, echoed again in the terminal summary."""

    def _record(number: int, ok: bool, detail: str) -> None:
        line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def desk_sweep(tmp_path_factory):
    """Run (once per L) the desk-scale `run-sweep` command and load its artifacts."""
    from interleaving import cli, io
    from interleaving.experiment import read_csv

    cache = {}

    def run(L: int):
        if L not in cache:
            out = tmp_path_factory.mktemp(f"sweep_L{L}")
            code = cli.main(["run-sweep", "--L", str(L), "--seed", "1", "--workers", "0",
                             "--out", str(out)])
            summary = io.read_json(out / "threshold.json")
            points = read_csv((out / "points.csv").read_text())
            cache[L] = (code, points, summary)
        return cache[L]

    return run
