"""Finite categories, natural systems of abelian groups, factorization
categories and nerves.

Composition is written ``comp(f, g) = f o g`` with ``g`` applied first, so it
needs ``tgt(g) == src(f)``.  A chain ``(f1, ..., fn)`` has composite
``f1 o f2 o ... o fn``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .abelian import AbGroup, check_hom
from .reports import Report


class CategoryError(ValueError):
    pass


@dataclass(frozen=True)
class FinCategory:
    objects: tuple[str, ...]
    morphisms: tuple[str, ...]
    src: Mapping[str, str]
    tgt: Mapping[str, str]
    identities: Mapping[str, str]
    table: Mapping[tuple[str, str], str]  # (f, g) -> f o g
    name: str = ""

    @classmethod
    def build(cls, objects: Iterable[str], arrows: Iterable[tuple[str, str, str]],
              identities: Mapping[str, str], table: Mapping[tuple[str, str], str],
              name: str = "") -> "FinCategory":
        """``arrows`` are ``(id, src, tgt)``; orderings are made lexicographic."""
        arrows = list(arrows)
        objs = tuple(sorted(set(objects)))
        mors = tuple(sorted(a for a, _, _ in arrows))
        if len(set(mors)) != len(mors):
            raise CategoryError("duplicate morphism ids")
        return cls(objs, mors, {a: s for a, s, _ in arrows}, {a: t for a, _, t in arrows},
                   dict(identities), dict(table), name)

    # basic queries
    def comp(self, f: str, g: str) -> str:
        try:
            return self.table[(f, g)]
        except KeyError:
            raise CategoryError(f"{f} o {g} is not defined") from None

    def composable(self, f: str, g: str) -> bool:
        return self.src[f] == self.tgt[g]

    def is_identity(self, f: str) -> bool:
        return self.identities.get(self.src[f]) == f

    def identity(self, obj: str) -> str:
        return self.identities[obj]

    def hom(self, a: str, b: str) -> list[str]:
        return [f for f in self.morphisms if self.src[f] == a and self.tgt[f] == b]

    def composite(self, chain: Sequence[str]) -> str:
        out = chain[-1]
        for f in reversed(chain[:-1]):
            out = self.comp(f, out)
        return out

    def __hash__(self):
        return hash((self.name, self.objects, self.morphisms))

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (self.objects == other.objects and self.morphisms == other.morphisms
                and dict(self.src) == dict(other.src) and dict(self.tgt) == dict(other.tgt)
                and dict(self.identities) == dict(other.identities)
                and dict(self.table) == dict(other.table))

    def opposite(self) -> "FinCategory":
        table = {(g, f): h for (f, g), h in self.table.items()}
        arrows = [(f, self.tgt[f], self.src[f]) for f in self.morphisms]
        return FinCategory.build(self.objects, arrows, self.identities, table,
                                 (self.name + "^op") if self.name else "")

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "morphisms": [{"id": f, "src": self.src[f], "tgt": self.tgt[f]} for f in self.morphisms],
            "identities": {o: self.identities[o] for o in self.objects},
            "compose": [[g, f, h] for (f, g), h in sorted(self.table.items())],
        }


def monoid_category(elements: Sequence[str], mul, unit: str, obj: str = "*",
                    name: str = "") -> FinCategory:
    """One-object category; ``mul(a, b)`` is ``a o b``."""
    table = {(a, b): mul(a, b) for a in elements for b in elements}
    return FinCategory.build([obj], [(a, obj, obj) for a in elements], {obj: unit}, table, name)


def validate_category(c: FinCategory) -> Report:
    rep = Report("category")
    mset = set(c.morphisms)
    for f in c.morphisms:
        rep.check("source and target are objects", c.src.get(f) in c.objects and c.tgt.get(f) in c.objects, f)
    for o in c.objects:
        i = c.identities.get(o)
        rep.check("identity is an endomorphism of its object",
                  i in mset and c.src.get(i) == o and c.tgt.get(i) == o, o)
    if not rep.ok:
        return rep
    for (f, g), h in c.table.items():
        ok = f in mset and g in mset and h in mset and c.composable(f, g)
        ok = ok and c.src[h] == c.src[g] and c.tgt[h] == c.tgt[f]
        rep.check("table entries are typed", ok, [g, f, h])
    for f in c.morphisms:
        for g in c.morphisms:
            if c.composable(f, g):
                rep.check("composition table is total", (f, g) in c.table, [g, f])
    if not rep.ok:
        return rep
    for f in c.morphisms:
        rep.check("left unit", c.table[(c.identities[c.tgt[f]], f)] == f, f)
        rep.check("right unit", c.table[(f, c.identities[c.src[f]])] == f, f)
    for f in c.morphisms:
        for g in c.morphisms:
            if not c.composable(f, g):
                continue
            fg = c.table[(f, g)]
            for h in c.morphisms:
                if c.composable(g, h):
                    lhs = c.table[(fg, h)]
                    rhs = c.table[(f, c.table[(g, h)])]
                    rep.check("associativity", lhs == rhs, [f, g, h])
    return rep


# -- functors ----------------------------------------------------------------

@dataclass(frozen=True)
class Functor:
    source: FinCategory
    target: FinCategory
    on_objects: Mapping[str, str]
    on_morphisms: Mapping[str, str]

    def __call__(self, f: str) -> str:
        return self.on_morphisms[f]


def identity_functor(c: FinCategory) -> Functor:
    return Functor(c, c, {o: o for o in c.objects}, {f: f for f in c.morphisms})


def validate_functor(F: Functor) -> Report:
    rep = Report("functor")
    s, t = F.source, F.target
    for f in s.morphisms:
        g = F.on_morphisms.get(f)
        ok = g in t.morphisms and t.src[g] == F.on_objects.get(s.src[f]) and t.tgt[g] == F.on_objects.get(s.tgt[f])
        rep.check("morphisms map to typed morphisms", ok, f)
    if not rep.ok:
        return rep
    for o in s.objects:
        rep.check("identities preserved", F(s.identities[o]) == t.identities[F.on_objects[o]], o)
    for (f, g), h in s.table.items():
        rep.check("composition preserved", t.comp(F(f), F(g)) == F(h), [g, f])
    return rep


# -- natural systems ----------------------------------------------------------

@dataclass
class NaturalSystem:
    """Coefficients ``D(f)`` with ``f_*: D(g) -> D(fg)`` (``push[(f, g)]``) and
    ``g^*: D(f) -> D(fg)`` (``pull[(f, g)]``), as integer matrices on coordinates."""

    category: FinCategory
    groups: dict[str, AbGroup]
    push: dict[tuple[str, str], np.ndarray]
    pull: dict[tuple[str, str], np.ndarray]

    def group(self, f: str) -> AbGroup:
        return self.groups[f]

    def push_apply(self, f: str, g: str, x: Sequence[int]) -> tuple[int, ...]:
        """``f_* x`` for ``x`` in ``D(g)``."""
        m = self.push[(f, g)]
        return self.groups[self.category.comp(f, g)].reduce(_mv(m, x))

    def pull_apply(self, f: str, g: str, x: Sequence[int]) -> tuple[int, ...]:
        """``g^* x`` for ``x`` in ``D(f)``."""
        m = self.pull[(f, g)]
        return self.groups[self.category.comp(f, g)].reduce(_mv(m, x))

    # coefficient protocol shared with the matrix category of split models
    left_act = push_apply
    right_act = pull_apply

    def comp(self, f: str, g: str) -> str:
        return self.category.comp(f, g)

    def zero(self, f: str) -> tuple[int, ...]:
        return self.groups[f].zero()

    def add(self, f: str, x, y) -> tuple[int, ...]:
        return self.groups[f].add(x, y)

    def neg(self, f: str, x) -> tuple[int, ...]:
        return self.groups[f].neg(x)

    def is_zero(self, f: str, x) -> bool:
        return not any(self.groups[f].reduce(x))

    def is_identity(self, f: str) -> bool:
        return self.category.is_identity(f)

    def src(self, f: str) -> str:
        return self.category.src[f]

    def tgt(self, f: str) -> str:
        return self.category.tgt[f]

    def identity(self, obj: str) -> str:
        return self.category.identities[obj]

    @classmethod
    def constant(cls, c: FinCategory, group: AbGroup) -> "NaturalSystem":
        k = group.ngens
        eye = np.eye(k, dtype=object) if k else np.zeros((0, 0), dtype=object)
        pairs = [(f, g) for f in c.morphisms for g in c.morphisms if c.composable(f, g)]
        return cls(c, {f: group for f in c.morphisms},
                   {p: eye.copy() for p in pairs}, {p: eye.copy() for p in pairs})

    @classmethod
    def from_actions(cls, c: FinCategory, groups: Mapping[str, AbGroup], push_fn, pull_fn) -> "NaturalSystem":
        """Build tables from callables ``push_fn(f, g)`` and ``pull_fn(f, g)`` returning matrices."""
        pairs = [(f, g) for f in c.morphisms for g in c.morphisms if c.composable(f, g)]
        return cls(c, dict(groups),
                   {p: np.asarray(push_fn(*p), dtype=object).reshape(groups[c.comp(*p)].ngens, groups[p[1]].ngens) for p in pairs},
                   {p: np.asarray(pull_fn(*p), dtype=object).reshape(groups[c.comp(*p)].ngens, groups[p[0]].ngens) for p in pairs})

    def to_json(self) -> dict:
        return {
            "groups": {f: g.to_json() for f, g in self.groups.items()},
            "push": [[f, g, _tolist(m)] for (f, g), m in sorted(self.push.items())],
            "pull": [[f, g, _tolist(m)] for (f, g), m in sorted(self.pull.items())],
        }


def _mv(m, x) -> list[int]:
    return [int(v) for v in m.dot(np.asarray(list(x), dtype=object).reshape(-1))]


def _tolist(m) -> list:
    return [[int(v) for v in row] for row in np.asarray(m, dtype=object).tolist()]


def _reduce_mat(m, group: AbGroup) -> np.ndarray:
    out = np.asarray(m, dtype=object).copy()
    for i, d in enumerate(group.moduli):
        if d:
            out[i, :] = out[i, :] % d
    return out


def _eq_mod(a, b, group: AbGroup) -> bool:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    if a.shape != b.shape:
        return False
    if a.size == 0:
        return True
    return bool((_reduce_mat(a - b, group) == 0).all())


def validate_natural_system(d: NaturalSystem) -> Report:
    c = d.category
    rep = Report("natural system")
    for f in c.morphisms:
        rep.check("every morphism has a group", f in d.groups, f)
    if not rep.ok:
        return rep
    pairs = [(f, g) for f in c.morphisms for g in c.morphisms if c.composable(f, g)]
    for f, g in pairs:
        fg = c.comp(f, g)
        for kind, table, dom in (("push", d.push, g), ("pull", d.pull, f)):
            m = table.get((f, g))
            ok = m is not None and np.asarray(m).shape == (d.groups[fg].ngens, d.groups[dom].ngens)
            ok = ok and check_hom(np.asarray(m, dtype=object).tolist(), d.groups[dom], d.groups[fg])
            rep.check(f"{kind} matrices are homomorphisms of the right shape", ok, [f, g])
    if not rep.ok:
        return rep
    for f in c.morphisms:
        idt = c.identities[c.tgt[f]]
        ids = c.identities[c.src[f]]
        eye = np.eye(d.groups[f].ngens, dtype=object)
        rep.check("identities push trivially", _eq_mod(d.push[(idt, f)], eye, d.groups[f]), [idt, f])
        rep.check("identities pull trivially", _eq_mod(d.pull[(f, ids)], eye, d.groups[f]), [f, ids])
    for a, b in pairs:
        ab = c.comp(a, b)
        for x in c.morphisms:
            if not c.composable(b, x):
                continue
            bx = c.comp(b, x)
            G = d.groups[c.comp(ab, x)]
            # (ab)_* = a_* b_* on D(x)
            rep.check("push is functorial",
                      _eq_mod(d.push[(ab, x)], d.push[(a, bx)].dot(d.push[(b, x)]), G), [a, b, x])
            # (bx)^* = x^* b^* on D(a)
            rep.check("pull is functorial",
                      _eq_mod(d.pull[(a, bx)], d.pull[(ab, x)].dot(d.pull[(a, b)]), G), [a, b, x])
            # a_* x^* = x^* a_* on D(b)
            rep.check("push and pull commute",
                      _eq_mod(d.push[(a, bx)].dot(d.pull[(b, x)]),
                              d.pull[(ab, x)].dot(d.push[(a, b)]), G), [a, b, x])
    return rep


# -- factorization category and nerve ------------------------------------------

def factorization_category(c: FinCategory) -> FinCategory:
    """Objects are the morphisms of ``c``; a morphism ``f -> g`` is a pair
    ``(a, b)`` with ``g = a o f o b``, written ``"a|f|b"``."""
    arrows = []
    out_of: dict[str, list[tuple[str, str, str]]] = {f: [] for f in c.morphisms}
    for f in c.morphisms:
        for a in c.morphisms:
            if c.src[a] != c.tgt[f]:
                continue
            af = c.comp(a, f)
            for b in c.morphisms:
                if c.tgt[b] == c.src[f]:
                    mid = f"{a}|{f}|{b}"
                    arrows.append((mid, f, c.comp(af, b)))
                    out_of[f].append((mid, a, b))
    target = {mid: g for mid, _, g in arrows}
    table = {}
    for f in c.morphisms:
        for m1, a, b in out_of[f]:
            for m2, a2, b2 in out_of[target[m1]]:
                table[(m2, m1)] = f"{c.comp(a2, a)}|{f}|{c.comp(b, b2)}"
    identities = {f: f"{c.identities[c.tgt[f]]}|{f}|{c.identities[c.src[f]]}" for f in c.morphisms}
    return FinCategory.build(c.morphisms, arrows, identities, table,
                             f"F({c.name})" if c.name else "")


@dataclass(frozen=True)
class Chain:
    """A composable tuple ``(f1, ..., fn)``; degree-0 chains carry an object."""

    morphisms: tuple[str, ...]
    composite: str
    obj: str | None = None

    @property
    def degree(self) -> int:
        return len(self.morphisms)

    def to_json(self):
        return list(self.morphisms) if self.morphisms else [self.obj]


def nerve(c: FinCategory, n: int) -> list[Chain]:
    """All composable ``n``-tuples in lexicographic order; degree 0 lists objects."""
    if n < 0:
        raise CategoryError("negative degree")
    if n == 0:
        return [Chain((), c.identities[o], o) for o in c.objects]
    out: list[Chain] = []

    def extend(prefix: tuple[str, ...], comp: str):
        if len(prefix) == n:
            out.append(Chain(prefix, comp))
            return
        last = prefix[-1]
        for g in c.morphisms:
            if c.tgt[g] == c.src[last]:
                extend(prefix + (g,), c.comp(comp, g))

    for f in c.morphisms:
        extend((f,), f)
    return out


def normalized_nerve(c: FinCategory, n: int) -> list[Chain]:
    """Chains without identity entries (degree 0 unchanged)."""
    return [ch for ch in nerve(c, n) if not any(c.is_identity(f) for f in ch.morphisms)]


def opposite_system(d: NaturalSystem, cop: FinCategory) -> NaturalSystem:
    """The natural system on ``C^op`` with pushes and pulls exchanged."""
    push = {(g, f): m for (f, g), m in d.pull.items()}
    pull = {(g, f): m for (f, g), m in d.push.items()}
    return NaturalSystem(cop, dict(d.groups), push, pull)
