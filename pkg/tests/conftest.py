import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from ergopt.instances import load_instance, random_instance, random_two_sided
from ergopt.pipeline import solve_instance
from ergopt.symbolic import LassoPoint

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")

INSTANCE_DIR = Path(__file__).resolve().parent.parent / "instances"

CORPUS_SEED = 20260815
N_ONE_SIDED = 200
N_TWO_SIDED = 50


@pytest.fixture(scope="session")
def e1_bundle():
    return solve_instance(load_instance(INSTANCE_DIR / "e1.json"))


@pytest.fixture(scope="session")
def e2_bundle():
    return solve_instance(load_instance(INSTANCE_DIR / "e2.json"))


@pytest.fixture(scope="session")
def golden_bundle():
    return solve_instance(load_instance(INSTANCE_DIR / "golden_mean.json"))


@pytest.fixture(scope="session")
def corpus():
    rng = random.Random(CORPUS_SEED)
    return [random_instance(rng) for _ in range(N_ONE_SIDED)]


@pytest.fixture(scope="session")
def corpus_bundles(corpus):
    return [solve_instance(inst) for inst in corpus]


@pytest.fixture(scope="session")
def two_sided_corpus():
    rng = random.Random(CORPUS_SEED + 1)
    return [random_two_sided(rng) for _ in range(N_TWO_SIDED)]


def periodic_lassos(sft, max_period):
    """All purely periodic admissible lassos with cycle length <= max_period.

    Distinct rotations are distinct points and are all included; the
    canonical form dedupes only genuine coincidences.
    """
    out = []
    seen = set()
    words = [(a,) for a in range(sft.alphabet_size)]
    for _ in range(max_period):
        for w in words:
            if sft.allows(w[-1], w[0]):
                x = LassoPoint.make((), w)
                if x not in seen and x.admissible(sft):
                    seen.add(x)
                    out.append(x)
        words = [w + (b,) for w in words for b in sft.successors[w[-1]]]
    return out


def random_lasso(rng, sft, max_preperiod=4):
    """Admissible lasso from a random walk: walk until a symbol repeats,
    close the cycle there."""
    walk = [rng.randrange(sft.alphabet_size)]
    while True:
        walk.append(rng.choice(sft.successors[walk[-1]]))
        for i, s in enumerate(walk[:-1]):
            if s == walk[-1] and i <= max_preperiod:
                return LassoPoint.make(walk[:i], walk[i:-1])
