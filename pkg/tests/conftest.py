"""Shared fixtures: derived model pools and random-table builders."""

from __future__ import annotations

import functools
import itertools
import random

import pytest

from dnalg.theorems import derive_actions
from dnalg.truncated import AlgebraPresentation


@functools.lru_cache(maxsize=None)
def derived(p: int, half_degrees: tuple[int, ...]):
    return tuple(derive_actions(p, list(half_degrees), max_unknowns=12))


# (prime, half-degree tuple) combinations whose exhaustive derivation is
# cheap; heavier tuples exist but are excluded from the shared pool.
POOL_TUPLES = [
    (3, (1,)), (3, (2,)), (3, (3,)),
    (3, (1, 1)), (3, (1, 2)), (3, (1, 3)), (3, (2, 2)), (3, (2, 3)), (3, (3, 3)),
    (5, (1,)), (5, (2,)), (5, (4,)), (5, (5,)),
    (5, (1, 1)), (5, (1, 2)), (5, (1, 4)), (5, (1, 5)), (5, (2, 5)),
    (5, (4, 5)), (5, (5, 5)),
]


@functools.lru_cache(maxsize=None)
def model_pool():
    pool = []
    for p, ms in POOL_TUPLES:
        pool.extend(derived(p, ms))
    return tuple(pool)


@pytest.fixture(scope="session")
def pool():
    return model_pool()


def s3_model(p: int = 3, m: int = 2) -> AlgebraPresentation:
    """First derived single-generator model (the sphere-like algebra)."""
    models = derived(p, (m,))
    assert models, f"no consistent model for p={p}, m={m}"
    return models[0]


def random_table(rng: random.Random, p: int, half_degrees: tuple[int, ...]):
    """A degree-respecting random action table (not necessarily a valid
    action): every free entry gets random coefficients."""
    names = [f"g{i}" for i in range(len(half_degrees))]
    gens = list(zip(names, sorted(half_degrees)))
    probe = AlgebraPresentation(p, gens)
    action = {}
    for i, (name, m) in enumerate(gens):
        for k in range(1, m):
            basis = probe.basis_of_degree(2 * m + 2 * k * (p - 1))
            action[(name, k)] = {
                e: rng.randrange(p) for e in basis if rng.random() < 0.7
            }
    return AlgebraPresentation(p, gens, action)


def random_element(rng: random.Random, a: AlgebraPresentation, degree: int):
    return a.element({e: rng.randrange(a.p) for e in a.basis_of_degree(degree)})
