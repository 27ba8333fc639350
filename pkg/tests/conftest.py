from __future__ import annotations

from importlib.resources import files

from hypothesis import HealthCheck, settings

from medial_bikei.algebra import read_table
from medial_bikei.presentation import read_matrix

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

DATA = files("medial_bikei") / "data"


def data_text(name: str) -> str:
    return (DATA / name).read_text()


def data_table(name: str):
    return read_table(data_text(name))


def data_matrix(name: str):
    return read_matrix(data_text(name))


# acceptance lines, printed once at the end of the run
ACCEPTANCE: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{cid:<12} {'PASS' if ok else 'FAIL'}  {detail}")
