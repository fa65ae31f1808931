import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pattern_lagrangian.pattern import Pattern, all_multisets

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@st.composite
def patterns(draw, max_n=4, max_edges=8, min_n=1):
    n = draw(st.integers(min_n, max_n))
    pool = all_multisets(n)
    edges = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=min(max_edges, len(pool)), unique=True))
    return Pattern(n, tuple(edges))


def random_patterns(count, seed=0, max_n=4, max_edges=8):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, max_n)
        pool = all_multisets(n)
        out.append(Pattern(n, tuple(rng.sample(pool, rng.randint(1, min(max_edges, len(pool)))))))
    return out
