import os
import random

import pytest

os.environ.setdefault('COMPGRAPH_ENV', 'testing')

from core.digraph import MultipartiteTournament, canonical_tournament  # noqa: E402

DEFAULT_SEED = 20240917


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the long exhaustive searches")
    parser.addoption("--seed", type=int, default=DEFAULT_SEED,
                     help="seed for the randomized property tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def pytest_report_header(config):
    return f"property-test seed: {config.getoption('--seed')}"


@pytest.fixture
def rng(request) -> random.Random:
    seed = request.config.getoption("--seed")
    print(f"seed={seed}")
    return random.Random(seed)


def with_dominating_vertex(t: MultipartiteTournament) -> MultipartiteTournament:
    """`t` plus a new singleton part whose vertex beats everything."""
    labels = [t.part_of(v) for v in range(t.n)] + [t.k]
    out = list(t.d.out) + [(1 << t.n) - 1]
    result, _ = canonical_tournament(labels, out)
    return result


def single_arc() -> MultipartiteTournament:
    """K_{1,1} oriented 0 -> 1: valid, but its competition graph has no edge."""
    return MultipartiteTournament.from_out_masks((1, 1), (0b10, 0))
