import numpy as np
import pytest
from hypothesis import settings

from metzlerzeta.digraph import (
    Digraph,
    build_torus,
    complete_edges,
    cycle_edges,
    directed_cycle,
    petersen_edges,
    random_digraph,
    single_arc,
    symmetrize,
)

settings.register_profile("repo", derandomize=True, deadline=None)
settings.load_profile("repo")

_CRITERIA: dict[int, tuple[str, bool, str]] = {}


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    _CRITERIA[number] = (title, bool(ok), detail)
    print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {number:2d}. {title}: {detail}")


def corpus() -> dict[str, Digraph]:
    """Small named digraphs with varied structure and rates (all with N <= 10)."""
    rng = np.random.default_rng(7)
    graphs = {
        "arc": single_arc(1.0, 1.0),
        "edge": symmetrize(2, [(0, 1)], 2.0, 1.0),
        "dcycle3": directed_cycle(3, 2.0, 1.0),
        "dcycle5": directed_cycle(5, 0.6, 0.9),
        "mixed": Digraph(3, [(0, 1), (1, 0), (1, 2)], [0.4, 1.3, 0.7], [0.5, 1.1, 0.8]),
        "C4": symmetrize(4, cycle_edges(4), 0.2, 1.0),
        "C5": symmetrize(5, cycle_edges(5), 0.7, 0.4),
        "K3": symmetrize(3, complete_edges(3), 1.0, 1.0),
        "K4": symmetrize(4, complete_edges(4), 0.3, 0.8),
        "petersen": symmetrize(10, petersen_edges(), 0.25, 0.6),
        "T1_4": build_torus(1, 4, 0.5, 0.5),
        "T2_3": build_torus(2, 3, 0.3, 1.2),
    }
    for i in range(6):
        g = random_digraph(int(rng.integers(3, 8)), rng)
        graphs[f"random{i}"] = g
    return graphs


@pytest.fixture(scope="session")
def graph_corpus() -> dict[str, Digraph]:
    return corpus()
