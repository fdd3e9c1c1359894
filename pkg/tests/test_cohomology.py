import random

import pytest

from trackgamma.abelian import AbGroup
from trackgamma.catcore import Functor, NaturalSystem, identity_functor, opposite_system
from trackgamma.cohomology import (Cochain, NoSolution, NotCocycle, SectionData, SectionError,
                                   class_of, coboundary, cohomology_group, default_section,
                                   extension_cocycle, perturb_section, pullback_cochain,
                                   pullback_system, random_cochain, random_section,
                                   reverse_cochain, solve_coboundary, solve_pseudosection,
                                   split_canonical_section, split_random_section,
                                   random_matrix_chain, zero_cochain)
from trackgamma.fixtures import (NONTRIVIAL_FIXTURE, arrow_category, fixture_categories,
                                 fixture_systems, table_fixtures)
from trackgamma.trackcat import dualize, split_model

from oracles import cyclic_group_cohomology_order, cyclic_integral_cohomology


@pytest.mark.parametrize("name", sorted(fixture_systems()))
@pytest.mark.parametrize("degree", [0, 1, 2])
def test_coboundary_squares_to_zero(name, degree):
    _, d = fixture_systems()[name]
    rng = random.Random(degree)
    for _ in range(10):
        s = random_cochain(rng, d, degree, normalized=rng.random() < 0.5)
        assert coboundary(coboundary(s)).is_zero()


def test_zero_cochain_has_zero_coboundary():
    _, d = fixture_systems()["span/Z3"]
    assert coboundary(zero_cochain(d, 2)).is_zero()


def test_degree_zero_coboundary_on_an_arrow():
    c = arrow_category()
    # D(1a) = Z/5, D(f) = Z/5, D(1b) = Z/5 with f_* = 2 and f^* = 3
    G = AbGroup.cyclic(5)

    def push(f, g):
        return [[2 if f == "f" else 1]]

    def pull(f, g):
        return [[3 if g == "f" else 1]]

    d = NaturalSystem.from_actions(c, {f: G for f in c.morphisms}, push, pull)
    s = Cochain(0, d, {("a",): (1,), ("b",): (1,)})
    # (delta s)(f) = f_* s(a) - f^* s(b) = 2 - 3
    assert coboundary(s).value(("f",)) == ((2 - 3) % 5,)


def test_trivial_category_has_no_higher_cohomology():
    _, d = fixture_systems()["trivial/Z2"]
    assert [cohomology_group(d, n).group.order() for n in range(4)] == [2, 1, 1, 1]


def test_zero_coefficients():
    c = fixture_categories()["(Z/4,*)"]
    d = NaturalSystem.constant(c, AbGroup())
    assert all(cohomology_group(d, n).group.is_trivial for n in range(4))


@pytest.mark.parametrize("n", range(5))
def test_cyclic_group_with_trivial_coefficients(n):
    _, d = fixture_systems()["Z/2/Z2"]
    assert cohomology_group(d, n).group.order() == cyclic_group_cohomology_order(2, 2, 1, n)


@pytest.mark.parametrize("n", range(4))
def test_cyclic_group_with_sign_coefficients(n):
    _, d = fixture_systems()["Z/2/Z4-sign"]
    # left action by -1 and trivial right action give the module Z/4 with g = -1
    assert cohomology_group(d, n).group.order() == cyclic_group_cohomology_order(2, 4, -1, n)


@pytest.mark.parametrize("n", range(4))
def test_cyclic_group_with_integer_coefficients(n):
    _, d = fixture_systems()["Z/3/Z"]
    g = cohomology_group(d, n).group
    free, tors = cyclic_integral_cohomology(3, n)
    assert g.free_rank == free
    assert (g.order() if g.is_finite else None) == (tors if not free else None)


def test_class_coordinates_reject_non_cocycles():
    _, d = fixture_systems()["Z/2/Z2"]
    H = cohomology_group(d, 2)
    s = Cochain(2, d, {("e1", "e1"): (1,)})
    assert H.class_coords(s) == (1,)
    bad = Cochain(1, d, {("e1",): (1,)})
    H1 = cohomology_group(d, 1)
    assert H1.class_coords(bad) == (1,)
    with pytest.raises(NotCocycle) as err:
        cohomology_group(fixture_systems()["Z/3/Z"][1], 1).class_coords(
            Cochain(1, fixture_systems()["Z/3/Z"][1], {("e1",): (1,)}))
    assert any(err.value.value)


def test_solve_coboundary_finds_preimages():
    _, d = fixture_systems()["(Z/4,*)/Z4"]
    rng = random.Random(4)
    for _ in range(5):
        c = random_cochain(rng, d, 1)
        target = coboundary(c)
        sol = solve_coboundary(d, target)
        assert sol is not None and coboundary(sol) == target


def test_pullback_along_identity():
    _, d = fixture_systems()["span/Z3"]
    F = identity_functor(d.category)
    p = pullback_system(d, F)
    assert p.groups == d.groups
    rng = random.Random(0)
    s = random_cochain(rng, d, 2)
    assert pullback_cochain(s, F, p) == s


def test_pullback_along_a_constant_functor():
    c = fixture_categories()["Z/3"]
    target = arrow_category()
    d = NaturalSystem.constant(target, AbGroup.cyclic(2))
    F = Functor(c, target, {"*": "a"}, {f: "1a" for f in c.morphisms})
    p = pullback_system(d, F)
    const = NaturalSystem.constant(c, AbGroup.cyclic(2))
    assert p.groups == const.groups
    assert all((p.push[k] == const.push[k]).all() and (p.pull[k] == const.pull[k]).all() for k in p.push)


def test_pullback_rejects_non_functors():
    c = fixture_categories()["Z/3"]
    target = arrow_category()
    d = NaturalSystem.constant(target, AbGroup.cyclic(2))
    F = Functor(c, target, {"*": "a"}, {f: "f" for f in c.morphisms})
    with pytest.raises(ValueError, match="not a functor"):
        pullback_system(d, F)


@pytest.mark.parametrize("name", sorted(fixture_systems()))
def test_reversal_commutes_with_coboundary(name):
    c, d = fixture_systems()[name]
    cop = c.opposite()
    dop = opposite_system(d, cop)
    rng = random.Random(7)
    for n in range(3):
        s = random_cochain(rng, d, n, normalized=False)
        assert coboundary(reverse_cochain(s, dop)) == reverse_cochain(coboundary(s), dop)


# characteristic classes

def test_split_model_canonical_section_has_zero_cocycle():
    model = split_model(AbGroup.cyclic(4), 3)
    c = extension_cocycle(model, split_canonical_section(model))
    rng = random.Random(0)
    for _ in range(30):
        assert c.value(random_matrix_chain(rng, 3, 3)).is_zero()
    assert class_of(model).is_zero


def test_split_model_pseudosection_from_a_rebased_section():
    model = split_model(AbGroup(1, (2,)), 3)
    rng = random.Random(3)
    s = split_random_section(model, rng)
    out = solve_pseudosection(model, s)
    c = extension_cocycle(model, out)
    for _ in range(30):
        ch = random_matrix_chain(rng, 3, 3)
        assert c.value(ch).is_zero()
        assert out.lift(ch[0]) == s.lift(ch[0])


@pytest.mark.parametrize("name", sorted(table_fixtures()))
def test_table_classes(name):
    ext = table_fixtures()[name]
    cls = class_of(ext)
    nontrivial = name in (NONTRIVIAL_FIXTURE, "z3-twisted")
    assert cls.is_zero != nontrivial
    out = solve_pseudosection(ext)
    assert isinstance(out, NoSolution) == nontrivial
    if nontrivial:
        assert out.cocycle == extension_cocycle(ext, default_section(ext))
        assert out.to_json()["result"] == "NoSolution"


def test_nontrivial_class_is_the_generator():
    ext = table_fixtures()[NONTRIVIAL_FIXTURE]
    cls = class_of(ext)
    assert cls.group == AbGroup.cyclic(2) and cls.coords == (1,)


@pytest.mark.parametrize("name", sorted(table_fixtures()))
def test_dual_class_matches(name):
    ext = table_fixtures()[name]
    dual = dualize(ext)
    assert class_of(dual).is_zero == class_of(ext).is_zero
    c = extension_cocycle(ext, default_section(ext))
    r = reverse_cochain(c, dual.system)
    H = cohomology_group(dual.system, 3)
    assert H.is_coboundary(r) == class_of(ext).is_zero


def test_section_errors_name_the_morphism():
    ext = table_fixtures()["z2-sign"]
    s = default_section(ext)
    bad = SectionData({**s.t, "c1": "g0"}, s.H, ext)
    with pytest.raises(SectionError, match="c1"):
        extension_cocycle(ext, bad)


def test_perturbation_shifts_the_cocycle():
    ext = table_fixtures()["z3-twisted"]
    rng = random.Random(11)
    s = random_section(ext, rng)
    c_t = extension_cocycle(ext, s)
    for _ in range(5):
        c = random_cochain(rng, ext.system, 2)
        assert extension_cocycle(ext, perturb_section(ext, s, c)) == coboundary(c) + c_t


def test_disk_cache(tmp_path, monkeypatch):
    from trackgamma import cohomology as coh
    monkeypatch.setenv(coh.CACHE_ENV, str(tmp_path))
    monkeypatch.setattr(coh, "_group_cache", {})
    _, d = fixture_systems()["span/Z3"]
    g = cohomology_group(d, 2).group
    assert list(tmp_path.iterdir())
    monkeypatch.setattr(coh, "_group_cache", {})
    assert cohomology_group(d, 2).group == g
