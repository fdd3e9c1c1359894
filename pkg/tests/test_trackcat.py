import random

import numpy as np
import pytest

from trackgamma.abelian import AbGroup, GroupError, MMatrix
from trackgamma.catcore import NaturalSystem, validate_category
from trackgamma.fixtures import coefficient_fixtures, table_fixtures
from trackgamma.nilgroup import parse_structural, random_hom
from trackgamma.trackcat import (MatrixCategory, PastingError, PastingScheme, TrackError, dualize,
                                 homotopy_quotient, paste, random_mmatrix, split_model, split_table,
                                 verify_linear_extension, verify_strict_coproducts)


@pytest.mark.parametrize("name", sorted(coefficient_fixtures()))
def test_split_models_are_linear_extensions(name):
    model = split_model(coefficient_fixtures()[name], 3)
    assert verify_linear_extension(model, samples=150, seed=1).ok


@pytest.mark.parametrize("name", sorted(table_fixtures()))
def test_table_fixtures_are_linear_extensions(name):
    assert verify_linear_extension(table_fixtures()[name]).ok


@pytest.mark.parametrize("name", sorted(table_fixtures()))
def test_duals_are_linear_extensions(name):
    assert verify_linear_extension(dualize(table_fixtures()[name])).ok


def test_corrupted_sigma_is_named():
    ext = table_fixtures()["z2-trivial"]
    sig = dict(ext.sigtab)
    key = ("g1", (1,))
    sig[key] = sig[("g1", (0,))]
    bad = type(ext)(**{**ext.__dict__, "sigtab": sig, "_siginv": None})
    rep = verify_linear_extension(bad)
    assert not rep.ok
    assert any("g1" in str(v["witness"]) for v in rep.violations)


def test_trivial_coefficients_give_the_homotopy_category():
    model = split_model(AbGroup(), 2)
    f = parse_structural("xi:3")
    t = model.idtrack(f)
    assert t.coords.shape == (1, 1)
    assert list(AbGroup().elements()) == [()]


def test_pasting_primitives():
    M = AbGroup.cyclic(4)
    model = split_model(M, 2)
    rng = random.Random(0)
    f = random_hom(rng, 1, 1)
    s = model.random_track(rng, f)
    assert paste(model, PastingScheme({"s": s})) is s
    sch = PastingScheme({"s": s})
    sch.add("inv", "s")
    sch.add("vcomp", "s", 0)
    out = paste(model, sch)
    assert model.track_eq(out, model.idtrack(f))
    sch = PastingScheme({"s": s})
    sch.add("lwhisk", parse_structural("xi:2"), "s")
    out = paste(model, sch)
    assert out.coords == s.coords.scaled(2)


def test_pasting_type_errors_name_the_step():
    model = split_model(AbGroup.cyclic(2), 2)
    rng = random.Random(1)
    s = model.random_track(rng, random_hom(rng, 1, 2))
    sch = PastingScheme({"s": s})
    sch.add("inv", "s")
    sch.add("lwhisk", parse_structural("xi:2"), 0)
    with pytest.raises(PastingError, match="step 1"):
        paste(model, sch)


def test_tracks_only_join_maps_with_equal_abelianization():
    model = split_model(AbGroup.cyclic(2), 2)
    with pytest.raises(TrackError):
        model.track(parse_structural("xi:2"), parse_structural("xi:3"))


def test_strict_coproducts():
    model = split_model(AbGroup(1, (2,)), 3)
    assert verify_strict_coproducts(model, samples=60, seed=2).ok
    rep = verify_strict_coproducts(table_fixtures()["z2-sign"])
    assert [r.status for r in rep.statements.values()] == ["not applicable"]


def test_sum_track_restrictions():
    M = AbGroup.cyclic(4)
    model = split_model(M, 3)
    rng = random.Random(5)
    t1 = model.random_track(rng, random_hom(rng, 1, 2))
    t2 = model.random_track(rng, random_hom(rng, 1, 1))
    s = model.sum_track([t1, t2])
    assert model.restrict(s, 1, 1).coords == t1.coords.block(0, 1, 0, 1)
    assert model.restrict(s, 1, 2).coords == t1.coords.block(1, 2, 0, 1)
    assert model.restrict(s, 2, 3).coords == t2.coords
    assert model.restrict(s, 2, 1).coords.is_zero()


def test_homotopy_quotients():
    assert isinstance(homotopy_quotient(split_model(AbGroup.cyclic(2), 2)), MatrixCategory)
    ext = table_fixtures()["z2-sign"]
    ho = homotopy_quotient(ext)
    assert validate_category(ho).ok
    assert len(ho.morphisms) == len(ext.base.morphisms)
    split = table_fixtures()["arrow-split"]
    assert homotopy_quotient(split).morphisms == split.underlying.morphisms


def test_matrix_category_biproducts():
    assert MatrixCategory(3).verify_biproducts().ok


@pytest.mark.parametrize("name", sorted(table_fixtures()))
def test_dualize_is_involutive(name):
    ext = table_fixtures()[name]
    assert dualize(dualize(ext)).same_data(ext)


def test_dualize_rejects_split_models():
    with pytest.raises(TrackError):
        dualize(split_model(AbGroup.cyclic(2), 2))


def test_split_table_of_a_constant_system():
    ext = table_fixtures()["arrow-split"]
    assert len(ext.tracks) == 2 * len(ext.base.morphisms)


def test_random_mmatrix_is_reduced():
    M = AbGroup.cyclic(3)
    x = random_mmatrix(random.Random(0), M, 2, 2)
    assert all(0 <= v[0] < 3 for row in x.entries() for v in row)
    assert isinstance(x, MMatrix) and np.shape(x.entries())[:2] == (2, 2)


def test_split_table_needs_finite_groups():
    c = table_fixtures()["arrow-split"].base
    with pytest.raises(GroupError, match="infinite"):
        split_table(c, NaturalSystem.constant(c, AbGroup.cyclic(0)))
