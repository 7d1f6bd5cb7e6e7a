from math import comb

import pytest

from koszulate.engine import is_isotropic, resonance_trivial, wq_dimension
from koszulate.families import (FAMILIES, SamplingFailed, build, codim_one, gaussian_rnc,
                                random_subspace, resonant_perturbation, split_bundle_p1, weyman)
from koszulate.fields import DEFAULT_PRIME, FieldConfig
from koszulate.formulas import wq_bound
from koszulate.linalg import rank
from koszulate.subspace import Subspace2, wedge

QQ = FieldConfig.rational()
BIG = FieldConfig.prime(DEFAULT_PRIME)


def test_random_is_deterministic():
    F = FieldConfig.prime(101)
    assert random_subspace(5, 7, F, seed=1).basis == random_subspace(5, 7, F, seed=1).basis
    assert random_subspace(5, 7, F, seed=1).basis != random_subspace(5, 7, F, seed=2).basis
    K = random_subspace(4, 3, QQ, seed=5)
    assert all(-10 <= v <= 10 for _, _, v in K.basis.entries())


def test_random_range_checks():
    with pytest.raises(ValueError):
        random_subspace(4, 7, QQ)
    assert random_subspace(4, 6, QQ).m == 6


def test_family_dimensions():
    assert codim_one(4).m == 5
    for n in range(4, 8):
        assert weyman(n).m == 2 * n - 3
        assert gaussian_rnc(n).m == 2 * n - 3
    assert split_bundle_p1(1, 1).n == 4 and split_bundle_p1(1, 1).m == 3
    assert split_bundle_p1(2, 3).m == 6


@pytest.mark.parametrize("n", [4, 5, 6])
def test_weyman_equals_gaussian(n):
    assert weyman(n).same_space(gaussian_rnc(n))


def test_weyman_attains_the_bound():
    assert resonance_trivial(gaussian_rnc(5))
    K = weyman(6, BIG)
    assert [wq_dimension(K, q) for q in range(3)] == [wq_bound(6, q) for q in range(3)]


def test_codim_one_perp():
    for n in (3, 5):
        perp = codim_one(n).perp()
        assert perp.nrows == 1 and perp.row(0) == {0: 1}


def test_split_bundles():
    assert resonance_trivial(split_bundle_p1(0, 0))
    assert split_bundle_p1(0, 0).n == 2
    K = split_bundle_p1(0, 2)
    assert not resonance_trivial(K)
    sections = [[int(j == 1 + i) for j in range(K.n)] for i in range(3)]
    assert is_isotropic(K, sections)
    with pytest.raises(ValueError):
        split_bundle_p1(-1, 2)


def test_resonant_perturbation_sits_in_codim_one():
    for n in (4, 5):
        for seed in range(10):
            K = resonant_perturbation(n, seed, QQ)
            assert K.m == 2 * n - 3
            assert K.is_contained_in(codim_one(n))
            assert not resonance_trivial(K)


def test_generic_divisorial_k_is_resonance_free():
    for seed in range(20):
        assert resonance_trivial(random_subspace(5, 7, BIG, seed))


def test_full_rank_invariant():
    for K in (codim_one(5), weyman(5), split_bundle_p1(2, 1), random_subspace(5, 4, QQ, 3)):
        assert rank(K.basis) == K.m <= comb(K.n, 2)


def test_build_dispatch():
    assert set(FAMILIES) == {"random", "codim-one", "weyman", "gaussian-rnc", "split-p1",
                             "resonant-perturbation"}
    assert build("weyman", n=5).m == 7
    assert build("split-p1", a=1, b=1, field=FieldConfig.prime(3)).field.p == 3
    assert build("random", n=4, m=2, seed=3).same_space(random_subspace(4, 2, QQ, 3))
    with pytest.raises(ValueError):
        build("weyman")
    with pytest.raises(ValueError):
        build("nonsense", n=4)


def test_sampling_cap():
    from koszulate import families
    old = families.MAX_ATTEMPTS
    families.MAX_ATTEMPTS = 0
    try:
        with pytest.raises(SamplingFailed):
            random_subspace(4, 2, QQ)
    finally:
        families.MAX_ATTEMPTS = old


def test_wedge_helper():
    assert wedge([1, 0, 0], [0, 1, 0], QQ) == [1, 0, 0]
    assert wedge([1, 2, 0], [1, 2, 0], QQ) == [0, 0, 0]
    K = Subspace2.from_pairs(3, [{(0, 1): 1}], QQ)
    assert K.basis.row(0) == {0: 1}
