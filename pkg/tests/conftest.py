import itertools
import random

import pytest
from hypothesis import settings, strategies as st

from groudit import Group, Groudit, Groupoid, make_cyclic_groudit, make_groubit

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def cyclic_with_balancers(n: int, seed: int) -> Groudit:
    rng = random.Random(seed)
    perms = list(itertools.permutations(range(n)))
    return make_cyclic_groudit(n, [rng.choice(perms) for _ in range(n)], [rng.choice(perms) for _ in range(n)])


def s3_groudit(seed: int = 0) -> Groudit:
    """Six objects, each S3: a nonabelian groudit."""
    rng = random.Random(seed)
    g = Groupoid(tuple(Group.symmetric3() for _ in range(6)))
    tabs = lambda: [tuple(rng.sample(range(6), 6)) for _ in range(6)]
    return Groudit(g, tabs(), tabs())


groudits = st.builds(cyclic_with_balancers, st.sampled_from([2, 3]), st.integers(0, 10**6))


@pytest.fixture
def groubit():
    return make_groubit()


@pytest.fixture
def z3():
    return make_cyclic_groudit(3)
