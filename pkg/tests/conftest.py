import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from dynsat import kernel
from dynsat.model import Formula

DATA = Path(__file__).parent / "data"
TRAFFIC = DATA / "traffic_lights.wcnf"


@pytest.fixture
def traffic_path():
    return TRAFFIC


@pytest.fixture(params=kernel.backends(), ids=lambda m: m.BACKEND)
def backend(request):
    return request.param


def small_formula(seed: int, num_vars: int = 8, num_clauses: int = 20, max_k: int = 3,
                  hard_fraction: float = 0.1) -> Formula:
    r = random.Random(seed)
    raw = []
    for _ in range(num_clauses):
        vs = r.sample(range(1, num_vars + 1), r.randint(1, min(max_k, num_vars)))
        raw.append((r.random() < hard_fraction, r.randint(1, 10),
                    [v if r.random() < 0.5 else -v for v in vs]))
    top = sum(w for h, w, _ in raw if not h) + 1
    return Formula.build([(top if h else w, lits) for h, w, lits in raw],
                         hard_limit=top, num_vars=num_vars)


@st.composite
def formulas(draw, max_vars=6, max_clauses=12, max_weight=20):
    nv = draw(st.integers(1, max_vars))
    n = draw(st.integers(0, max_clauses))
    pairs = []
    for _ in range(n):
        vs = draw(st.lists(st.integers(1, nv), min_size=1, max_size=min(3, nv), unique=True))
        signs = draw(st.lists(st.booleans(), min_size=len(vs), max_size=len(vs)))
        pairs.append((draw(st.integers(1, max_weight)),
                      [-v if s else v for v, s in zip(vs, signs)]))
    hard = draw(st.one_of(st.none(), st.integers(1, max_weight + 1)))
    return Formula.build(pairs, hard_limit=hard, num_vars=nv)
