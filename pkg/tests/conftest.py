import random

import pytest

from wittforge.towers import AFFINE, CYCLOTOMIC, S_PLUS_T, TowerSpec


def random_element(spec, rng, rep="char0", mod=None, terms=4, max_coeff=None):
    """Random sparse element with exponents inside the normal-form bounds."""
    gens = spec.gens(rep)
    bounds = spec.residue_bounds if rep == "residue" else spec.char0_bounds
    if max_coeff is None:
        max_coeff = spec.p if rep == "residue" else spec.p ** (mod or 3)
    coeffs = {}
    for _ in range(rng.randrange(1, terms + 1)):
        exps = []
        for b in bounds:
            hi = (b - 1) if b is not None else 6
            exps.append(rng.randrange(0, hi + 1))
        coeffs[tuple(exps)] = rng.randrange(1, max_coeff)
    return spec.element(coeffs, rep=rep, mod=mod)


@pytest.fixture
def rng():
    return random.Random(20260809)


@pytest.fixture
def spt_spec():
    return TowerSpec(2, 3, S_PLUS_T)


@pytest.fixture
def spt3_spec():
    return TowerSpec(3, 2, S_PLUS_T)


@pytest.fixture
def aff_spec():
    return TowerSpec(3, 2, AFFINE, affine_params=(2, 1))


@pytest.fixture
def cyc_spec():
    return TowerSpec(3, 3, CYCLOTOMIC, Dw=2)
