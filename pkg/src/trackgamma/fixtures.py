"""Small categories, coefficient systems and track extensions used by the
tests, the scripts and the command line."""
from __future__ import annotations

from functools import lru_cache

from .abelian import AbGroup
from .catcore import FinCategory, NaturalSystem, factorization_category, monoid_category
from .trackcat import TableExtension, crossed_module_extension, split_table


def trivial_category() -> FinCategory:
    return FinCategory.build(["*"], [("1", "*", "*")], {"*": "1"}, {("1", "1"): "1"}, "trivial")


def cyclic_group_category(n: int) -> FinCategory:
    """One object, morphisms ``e0 .. e{n-1}`` composing by addition mod ``n``."""
    names = [f"e{i}" for i in range(n)]
    return monoid_category(names, lambda a, b: f"e{(int(a[1:]) + int(b[1:])) % n}", "e0",
                           name=f"Z/{n}")


def multiplicative_monoid_category(n: int) -> FinCategory:
    """One object, morphisms ``m0 .. m{n-1}`` composing by multiplication mod ``n``."""
    names = [f"m{i}" for i in range(n)]
    return monoid_category(names, lambda a, b: f"m{(int(a[1:]) * int(b[1:])) % n}", f"m{1 % n}",
                           name=f"(Z/{n},*)")


def arrow_category() -> FinCategory:
    """Two objects ``a, b`` and one non-identity arrow ``f: a -> b``."""
    arrows = [("1a", "a", "a"), ("1b", "b", "b"), ("f", "a", "b")]
    table = {("1a", "1a"): "1a", ("1b", "1b"): "1b", ("f", "1a"): "f", ("1b", "f"): "f"}
    return FinCategory.build(["a", "b"], arrows, {"a": "1a", "b": "1b"}, table, "arrow")


def span_category() -> FinCategory:
    """``b <- a -> c``."""
    arrows = [("1a", "a", "a"), ("1b", "b", "b"), ("1c", "c", "c"), ("f", "a", "b"), ("g", "a", "c")]
    table = {("1a", "1a"): "1a", ("1b", "1b"): "1b", ("1c", "1c"): "1c",
             ("f", "1a"): "f", ("1b", "f"): "f", ("g", "1a"): "g", ("1c", "g"): "g"}
    return FinCategory.build(["a", "b", "c"], arrows, {"a": "1a", "b": "1b", "c": "1c"}, table, "span")


def fixture_categories() -> dict[str, FinCategory]:
    return {
        "trivial": trivial_category(),
        "Z/2": cyclic_group_category(2),
        "Z/3": cyclic_group_category(3),
        "arrow": arrow_category(),
        "span": span_category(),
        "F(arrow)": factorization_category(arrow_category()),
        "(Z/4,*)": multiplicative_monoid_category(4),
    }


def bimodule_system(c: FinCategory, n: int) -> NaturalSystem:
    """``D(m_k) = Z/n`` with ``f_* x = f x`` and ``g^* x = x g`` on the
    multiplicative monoid of ``Z/n``."""
    G = AbGroup.cyclic(n)
    return NaturalSystem.from_actions(c, {f: G for f in c.morphisms},
                                      lambda f, g: [[int(f[1:]) % n]],
                                      lambda f, g: [[int(g[1:]) % n]])


def sign_system(c: FinCategory, n: int) -> NaturalSystem:
    """``Z/n`` coefficients on a cyclic group category where odd elements act by -1
    on the left and trivially on the right."""
    G = AbGroup.cyclic(n)
    return NaturalSystem.from_actions(c, {f: G for f in c.morphisms},
                                      lambda f, g: [[(-1) ** int(f[1:]) % n]],
                                      lambda f, g: [[1]])


def fixture_systems() -> dict[str, tuple[FinCategory, NaturalSystem]]:
    """Category and coefficient pairs used for cochain-level tests."""
    cats = fixture_categories()
    z2 = AbGroup.cyclic(2)
    out = {
        "trivial/Z2": (cats["trivial"], NaturalSystem.constant(cats["trivial"], z2)),
        "Z/2/Z2": (cats["Z/2"], NaturalSystem.constant(cats["Z/2"], z2)),
        "Z/2/Z4-sign": (cats["Z/2"], sign_system(cats["Z/2"], 4)),
        "Z/3/Z": (cats["Z/3"], NaturalSystem.constant(cats["Z/3"], AbGroup.cyclic(0))),
        "arrow/Z+Z2": (cats["arrow"], NaturalSystem.constant(cats["arrow"], AbGroup(1, (2,)))),
        "span/Z3": (cats["span"], NaturalSystem.constant(cats["span"], AbGroup.cyclic(3))),
        "F(arrow)/Z2": (cats["F(arrow)"], NaturalSystem.constant(cats["F(arrow)"], z2)),
        "(Z/4,*)/Z4": (cats["(Z/4,*)"], bimodule_system(cats["(Z/4,*)"], 4)),
    }
    return out


@lru_cache(maxsize=None)
def _table_fixtures() -> tuple[tuple[str, TableExtension], ...]:
    cats = fixture_categories()
    arrow = cats["arrow"]
    mono = cats["(Z/4,*)"]
    items = [
        # sign action: nonzero class in Z/2
        ("z2-sign", crossed_module_extension(4, 4, 2, 3, "z2-sign")),
        ("z2-trivial", crossed_module_extension(4, 4, 2, 1, "z2-trivial")),
        ("z3-twisted", crossed_module_extension(9, 9, 3, 4, "z3-twisted")),
        ("arrow-split", split_table(arrow, NaturalSystem.constant(arrow, AbGroup.cyclic(2)), "arrow-split")),
        # rank-one split model with coefficients Z/4, reduced mod 4
        ("rank1-split-mod4", split_table(mono, bimodule_system(mono, 4), "rank1-split-mod4")),
    ]
    return tuple(items)


def table_fixtures() -> dict[str, TableExtension]:
    return dict(_table_fixtures())


NONTRIVIAL_FIXTURE = "z2-sign"


def coefficient_fixtures() -> dict[str, AbGroup]:
    return {"Z/2": AbGroup.cyclic(2), "Z/4": AbGroup.cyclic(4), "Z+Z/2": AbGroup(1, (2,))}


def parse_group(text: str) -> AbGroup:
    """``0``, ``Z``, ``Z/4``, ``Z+Z/2``, ``Z/2+Z/4``, ``Z^2``..."""
    text = text.replace(" ", "")
    if text in ("0", ""):
        return AbGroup()
    moduli = []
    for part in text.split("+"):
        if part.startswith("Z/"):
            moduli.append(int(part[2:]))
        elif part == "Z":
            moduli.append(0)
        elif part.startswith("Z^"):
            moduli.extend([0] * int(part[2:]))
        else:
            raise ValueError(f"cannot parse group {text!r}")
    return AbGroup.from_moduli(moduli)

