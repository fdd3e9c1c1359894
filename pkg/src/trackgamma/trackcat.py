"""Linear track extensions as data.

Two representations share one interface (``comp``, ``p``, ``idtrack``,
``vcomp``, ``inv``, ``lwhisk``, ``rwhisk``, ``sigma``, ``sigma_inv``):

* ``SplitModel``: maps are class-2 nilpotent homomorphisms ``F_n -> F_m``,
  ``p`` is abelianization, and a track ``u => v`` (when ``ab u == ab v``) is an
  ``m x n`` matrix over a coefficient group ``M``.  Vertical composition adds,
  ``k_* a = ab(k) a`` and ``h^* a = a ab(h)``.
* ``TableExtension``: finite tables for every operation.

``vcomp(b, a)`` is ``b`` after ``a``.  ``lwhisk(k, a)`` is ``k o a`` and
``rwhisk(a, h)`` is ``a o h``.
"""
from __future__ import annotations

import itertools
import random
import threading
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .abelian import AbGroup, MMatrix
from .catcore import (FinCategory, Functor, NaturalSystem, monoid_category, opposite_system,
                      validate_category, validate_functor, validate_natural_system)
from .nilgroup import (Nil2Element, Nil2Hom, abelianize, block_sum, copairing, elements_up_to,
                       hom_compose, identity_hom, inclusion_hom, injection_hom, random_hom,
                       retraction_hom, zero_hom)
from .reports import Report

TABLE_MORPHISM_CAP = 64
TABLE_GROUP_CAP = 16


class TrackError(ValueError):
    pass


class PastingError(TrackError):
    pass


# -- the matrix category ---------------------------------------------------

@dataclass(frozen=True)
class IntMat:
    """Hashable integer matrix; a morphism ``cols -> rows`` of the matrix category."""

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    @classmethod
    def from_array(cls, a) -> "IntMat":
        a = np.asarray(a, dtype=object)
        return cls(a.shape[0], a.shape[1], tuple(tuple(int(v) for v in row) for row in a))

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMat":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @property
    def arr(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.data):
            for j, v in enumerate(row):
                out[i, j] = v
        return out

    def __matmul__(self, other: "IntMat") -> "IntMat":
        if self.cols != other.rows:
            raise TrackError(f"cannot compose {self.rows}x{self.cols} after {other.rows}x{other.cols}")
        return IntMat.from_array(self.arr.dot(other.arr).reshape(self.rows, other.cols))

    def is_identity(self) -> bool:
        return self == IntMat.identity(self.rows) if self.rows == self.cols else False

    def to_json(self):
        return [list(r) for r in self.data] if self.rows else {"rows": 0, "cols": self.cols}

    def __str__(self):
        return str([list(r) for r in self.data]) if self.rows else f"0x{self.cols}"


class MatrixCoefficients:
    """The system ``D(A) = M^{rows x cols}`` on integer matrices, acting by
    left and right multiplication (a biadditive bifunctor)."""

    def __init__(self, M: AbGroup):
        self.M = M

    def comp(self, a: IntMat, b: IntMat) -> IntMat:
        return a @ b

    def left_act(self, a: IntMat, b: IntMat, x: MMatrix) -> MMatrix:
        return x.lmul(a.arr)

    def right_act(self, a: IntMat, b: IntMat, x: MMatrix) -> MMatrix:
        return x.rmul(b.arr)

    def zero(self, a: IntMat) -> MMatrix:
        return MMatrix.zeros(self.M, a.rows, a.cols)

    def add(self, a, x: MMatrix, y: MMatrix) -> MMatrix:
        return x + y

    def neg(self, a, x: MMatrix) -> MMatrix:
        return -x

    def is_zero(self, a, x: MMatrix) -> bool:
        return x.is_zero()

    def is_identity(self, a: IntMat) -> bool:
        return a.is_identity()

    def src(self, a: IntMat) -> int:
        return a.cols

    def tgt(self, a: IntMat) -> int:
        return a.rows

    def identity(self, n: int) -> IntMat:
        return IntMat.identity(n)


@dataclass
class MatrixCategory:
    """Homotopy category of a split model: ranks and integer matrices."""

    max_rank: int

    def comp(self, a: IntMat, b: IntMat) -> IntMat:
        return a @ b

    def identity(self, n: int) -> IntMat:
        return IntMat.identity(n)

    def inclusion(self, n: int, m: int, first: bool) -> IntMat:
        out = np.zeros((n + m, n if first else m), dtype=object)
        off = 0 if first else n
        for i in range(n if first else m):
            out[off + i, i] = 1
        return IntMat.from_array(out)

    def projection(self, n: int, m: int, first: bool) -> IntMat:
        inc = self.inclusion(n, m, first)
        return IntMat.from_array(inc.arr.T)

    def verify_biproducts(self) -> Report:
        rep = Report("biproducts in the matrix category")
        for n in range(self.max_rank + 1):
            for m in range(self.max_rank + 1 - n):
                i1, i2 = self.inclusion(n, m, True), self.inclusion(n, m, False)
                p1, p2 = self.projection(n, m, True), self.projection(n, m, False)
                rep.check("p1 i1 = 1", p1 @ i1 == IntMat.identity(n), [n, m])
                rep.check("p2 i2 = 1", p2 @ i2 == IntMat.identity(m), [n, m])
                rep.check("p2 i1 = 0", p2 @ i1 == IntMat.zero(m, n), [n, m])
                rep.check("p1 i2 = 0", p1 @ i2 == IntMat.zero(n, m), [n, m])
                s = IntMat.from_array((i1 @ p1).arr + (i2 @ p2).arr)
                rep.check("i1 p1 + i2 p2 = 1", s == IntMat.identity(n + m), [n, m])
        return rep


# -- split model -------------------------------------------------------------

@dataclass(frozen=True)
class SplitTrack:
    src: Nil2Hom
    tgt: Nil2Hom
    coords: MMatrix

    def to_json(self) -> dict:
        return {"src": self.src.to_strings(), "tgt": self.tgt.to_strings(),
                "source_rank": self.src.source_rank, "target_rank": self.src.target_rank,
                "coords": self.coords.to_json()}


class SplitModel:
    """Split linear track extension over the class-2 nilpotent theory."""

    representation = "split"

    def __init__(self, M: AbGroup, max_rank: int = 3):
        if max_rank < 1:
            raise TrackError("max_rank must be at least 1")
        self.M = M
        self.max_rank = max_rank
        self.coefficients = MatrixCoefficients(M)
        self._homs: dict[tuple[int, int, int], tuple[Nil2Hom, ...]] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"SplitModel(M={self.M}, max_rank={self.max_rank})"

    def to_json(self) -> dict:
        return {"kind": "split", "M": self.M.to_json(), "max_rank": self.max_rank}

    # maps
    def comp(self, f: Nil2Hom, g: Nil2Hom) -> Nil2Hom:
        return hom_compose(f, g)

    def identity(self, n: int) -> Nil2Hom:
        return identity_hom(n)

    def p(self, f: Nil2Hom) -> IntMat:
        return IntMat.from_array(abelianize(f).reshape(f.target_rank, f.source_rank))

    def lift(self, a: IntMat) -> Nil2Hom:
        """The map with abelianization ``a`` and no commutator parts."""
        m, n = a.rows, a.cols
        zc = (0,) * (m * (m - 1) // 2)
        return Nil2Hom(n, m, tuple(Nil2Element(m, tuple(a.data[i][j] for i in range(m)), zc)
                                   for j in range(n)))

    def homs(self, n: int, m: int, length: int) -> tuple[Nil2Hom, ...]:
        """All maps ``F_n -> F_m`` whose generator images have word length ``<= length``."""
        key = (n, m, length)
        with self._lock:
            if key not in self._homs:
                elems = elements_up_to(m, length) if m else (Nil2Element.identity(0),)
                self._homs[key] = tuple(Nil2Hom(n, m, ims) for ims in itertools.product(elems, repeat=n))
            return self._homs[key]

    def random_hom(self, rng: random.Random, n: int, m: int, bound: int = 2) -> Nil2Hom:
        return random_hom(rng, n, m, bound)

    # tracks
    def track(self, u: Nil2Hom, v: Nil2Hom, coords: MMatrix | None = None) -> SplitTrack:
        if (u.source_rank, u.target_rank) != (v.source_rank, v.target_rank):
            raise TrackError("tracks join parallel maps only")
        if not np.array_equal(abelianize(u), abelianize(v)):
            raise TrackError("no track between maps with different abelianizations")
        shape = (u.target_rank, u.source_rank)
        if coords is None:
            coords = MMatrix.zeros(self.M, *shape)
        if coords.shape != shape or coords.group != self.M:
            raise TrackError(f"track coordinates must be an {shape} matrix over {self.M}")
        return SplitTrack(u, v, coords)

    def idtrack(self, u: Nil2Hom) -> SplitTrack:
        return self.track(u, u)

    def vcomp(self, b: SplitTrack, a: SplitTrack) -> SplitTrack:
        if a.tgt != b.src:
            raise TrackError("vertical composition needs target of the first = source of the second")
        return SplitTrack(a.src, b.tgt, a.coords + b.coords)

    def inv(self, a: SplitTrack) -> SplitTrack:
        return SplitTrack(a.tgt, a.src, -a.coords)

    def lwhisk(self, k: Nil2Hom, a: SplitTrack) -> SplitTrack:
        if k.source_rank != a.src.target_rank:
            raise TrackError("left whisker: map does not compose with the track")
        return SplitTrack(hom_compose(k, a.src), hom_compose(k, a.tgt), a.coords.lmul(abelianize(k)))

    def rwhisk(self, a: SplitTrack, h: Nil2Hom) -> SplitTrack:
        if a.src.source_rank != h.target_rank:
            raise TrackError("right whisker: map does not compose with the track")
        return SplitTrack(hom_compose(a.src, h), hom_compose(a.tgt, h), a.coords.rmul(abelianize(h)))

    def sigma(self, f: Nil2Hom, x: MMatrix) -> SplitTrack:
        return self.track(f, f, x)

    def sigma_inv(self, f: Nil2Hom, a: SplitTrack) -> MMatrix:
        if a.src != f or a.tgt != f:
            raise TrackError("sigma inverse needs a self-track of the given map")
        return a.coords

    def track_eq(self, a: SplitTrack, b: SplitTrack) -> bool:
        return a.src == b.src and a.tgt == b.tgt and a.coords == b.coords

    # coproducts
    def sum_track(self, tracks: Sequence[SplitTrack]) -> SplitTrack:
        """``a_1 v ... v a_k``."""
        return SplitTrack(block_sum([t.src for t in tracks]), block_sum([t.tgt for t in tracks]),
                          MMatrix.block_diag(self.M, [t.coords for t in tracks]))

    def copair_track(self, tracks: Sequence[SplitTrack]) -> SplitTrack:
        """``(a_1, ..., a_k)`` for tracks with a common target object."""
        m = tracks[0].src.target_rank
        return SplitTrack(copairing([t.src for t in tracks]), copairing([t.tgt for t in tracks]),
                          MMatrix.hstack(self.M, [t.coords for t in tracks], m))

    def restrict(self, a: SplitTrack, e: int, g: int) -> SplitTrack:
        """``(r_g)_* (i_e)^* a``: the ``(g, e)`` component as a track ``Z -> Z``."""
        return self.lwhisk(retraction_hom(a.src.target_rank, g),
                           self.rwhisk(a, inclusion_hom(a.src.source_rank, e)))

    def random_track(self, rng: random.Random, u: Nil2Hom, bound: int = 3) -> SplitTrack:
        return self.track(u, u, random_mmatrix(rng, self.M, u.target_rank, u.source_rank, bound))

    def random_rebase(self, rng: random.Random, u: Nil2Hom) -> Nil2Hom:
        """A map with the same abelianization and random commutator parts."""
        m = u.target_rank
        ims = []
        for im in u.images:
            comm = tuple(c + rng.randint(-2, 2) for c in im.comm)
            ims.append(Nil2Element(m, im.gen, comm))
        return Nil2Hom(u.source_rank, m, tuple(ims))


def random_mmatrix(rng: random.Random, M: AbGroup, rows: int, cols: int, bound: int = 3) -> MMatrix:
    comps = []
    for d in M.moduli:
        a = np.zeros((rows, cols), dtype=object)
        for i in range(rows):
            for j in range(cols):
                a[i, j] = rng.randrange(d) if d else rng.randint(-bound, bound)
        comps.append(a)
    return MMatrix(M, comps, (rows, cols))


def split_model(M: AbGroup, max_rank: int = 3) -> SplitModel:
    return SplitModel(M, max_rank)


# -- table extensions ----------------------------------------------------------

@dataclass
class TableExtension:
    """A finite linear track extension given by tables.

    ``underlying`` is the category of maps, ``proj`` its functor onto ``base``.
    Track tables: ``vtab[(b, a)] = b [] a``, ``itab[a]`` inverse,
    ``idtab[f]`` identity track, ``lwtab[(k, a)] = k o a``,
    ``rwtab[(a, h)] = a o h``, ``sigtab[(f, x)] = sigma_f(x)``.
    """

    name: str
    base: FinCategory
    system: NaturalSystem
    underlying: FinCategory
    proj: dict[str, str]
    track_src: dict[str, str]
    track_tgt: dict[str, str]
    vtab: dict[tuple[str, str], str]
    itab: dict[str, str]
    idtab: dict[str, str]
    lwtab: dict[tuple[str, str], str]
    rwtab: dict[tuple[str, str], str]
    sigtab: dict[tuple[str, tuple[int, ...]], str]
    zero_object: str | None = None
    _siginv: dict | None = field(default=None, repr=False, compare=False)

    representation = "table"

    @property
    def coefficients(self) -> NaturalSystem:
        return self.system

    # interface
    def comp(self, f: str, g: str) -> str:
        return self.underlying.comp(f, g)

    def identity(self, obj: str) -> str:
        return self.underlying.identities[obj]

    def p(self, f: str) -> str:
        return self.proj[f]

    def idtrack(self, f: str) -> str:
        return self.idtab[f]

    def vcomp(self, b: str, a: str) -> str:
        try:
            return self.vtab[(b, a)]
        except KeyError:
            raise TrackError(f"vertical composite of {b} after {a} undefined") from None

    def inv(self, a: str) -> str:
        return self.itab[a]

    def lwhisk(self, k: str, a: str) -> str:
        try:
            return self.lwtab[(k, a)]
        except KeyError:
            raise TrackError(f"left whisker {k} o {a} undefined") from None

    def rwhisk(self, a: str, h: str) -> str:
        try:
            return self.rwtab[(a, h)]
        except KeyError:
            raise TrackError(f"right whisker {a} o {h} undefined") from None

    def sigma(self, f: str, x) -> str:
        g = self.system.groups[self.proj[f]]
        return self.sigtab[(f, g.reduce(x))]

    def sigma_inv(self, f: str, a: str) -> tuple[int, ...]:
        if self._siginv is None:
            self._siginv = {(ff, t): x for (ff, x), t in self.sigtab.items()}
        try:
            return self._siginv[(f, a)]
        except KeyError:
            raise TrackError(f"{a} is not a self-track of {f}") from None

    def track_eq(self, a: str, b: str) -> bool:
        return a == b

    @property
    def tracks(self) -> list[str]:
        return sorted(self.track_src)

    def tracks_between(self, f: str, g: str) -> list[str]:
        return [t for t in self.tracks if self.track_src[t] == f and self.track_tgt[t] == g]

    def to_json(self) -> dict:
        doc = {
            "kind": "table",
            "name": self.name,
            "base": self.base.to_json(),
            "natural_system": self.system.to_json(),
            "underlying": self.underlying.to_json(),
            "projection": dict(sorted(self.proj.items())),
            "tracks": [{"id": t, "src": self.track_src[t], "tgt": self.track_tgt[t]} for t in self.tracks],
            "vertical": [[a, b, c] for (b, a), c in sorted(self.vtab.items())],
            "inverse": dict(sorted(self.itab.items())),
            "identity": dict(sorted(self.idtab.items())),
            "left_whisker": [[k, a, c] for (k, a), c in sorted(self.lwtab.items())],
            "right_whisker": [[a, h, c] for (a, h), c in sorted(self.rwtab.items())],
            "sigma": [[f, list(x), t] for (f, x), t in sorted(self.sigtab.items())],
        }
        if self.zero_object is not None:
            doc["zero_object"] = self.zero_object
        return doc

    def same_data(self, other: "TableExtension") -> bool:
        return (self.base == other.base and self.underlying == other.underlying
                and self.proj == other.proj and self.track_src == other.track_src
                and self.track_tgt == other.track_tgt and self.vtab == other.vtab
                and self.itab == other.itab and self.idtab == other.idtab
                and self.lwtab == other.lwtab and self.rwtab == other.rwtab
                and self.sigtab == other.sigtab
                and self.system.groups == other.system.groups
                and _same_mats(self.system.push, other.system.push)
                and _same_mats(self.system.pull, other.system.pull))


def _same_mats(a: Mapping, b: Mapping) -> bool:
    if a.keys() != b.keys():
        return False
    return all(np.array_equal(np.asarray(a[k], dtype=object), np.asarray(b[k], dtype=object)) for k in a)


def crossed_module_extension(order_g: int, order_n: int, k: int, a: int, name: str = "") -> TableExtension:
    """The track category of the crossed module ``Z/N --(x k)--> Z/G`` with
    ``Z/G`` acting on ``Z/N`` by ``g . n = a^g n``.

    One object; maps are elements ``g`` of ``Z/G``; tracks ``(g, n): g => g + k n``.
    Whiskers: ``h o (g, n) = (h + g, a^h n)`` and ``(g, n) o h = (g + h, n)``.
    The homotopy category is ``Z/G / im`` with coefficients ``ker`` of the
    boundary.
    """
    G, N = order_g, order_n
    if (k * N) % G:
        raise TrackError("boundary map is not well defined")
    if np.gcd(a, N) != 1 or pow(a, G, N) != 1 % N:
        raise TrackError("action is not a Z/G action by automorphisms")
    for g in range(G):
        for n in range(N):
            if (k * pow(a, g, N) * n - k * n) % G:
                raise TrackError("boundary is not equivariant")
    for m in range(N):
        if pow(a, k * m, N) != 1 % N:
            raise TrackError("Peiffer identity fails")
    im = sorted({(k * n) % G for n in range(N)})
    ker = sorted(n for n in range(N) if (k * n) % G == 0)
    order = len(ker)
    gen = min((n for n in ker if n), default=0)
    D = AbGroup.cyclic(order) if order > 1 else AbGroup()

    def rep(g):
        return min((g + i) % G for i in im)

    cosets = sorted({rep(g) for g in range(G)})
    cname = {c: f"c{c}" for c in cosets}
    base = monoid_category([cname[c] for c in cosets],
                           lambda x, y: cname[rep(int(x[1:]) + int(y[1:]))],
                           cname[0], name=(name + ".base") if name else "")
    gname = {g: f"g{g}" for g in range(G)}
    under = monoid_category([gname[g] for g in range(G)],
                            lambda x, y: gname[(int(x[1:]) + int(y[1:])) % G], gname[0],
                            name=(name + ".maps") if name else "")

    def push_fn(f, g):
        return [[pow(a, int(f[1:]), order)]] if D.ngens else np.zeros((0, 0), dtype=object)

    def pull_fn(f, g):
        return [[1]] if D.ngens else np.zeros((0, 0), dtype=object)

    system = NaturalSystem.from_actions(base, {f: D for f in base.morphisms}, push_fn, pull_fn)

    def tid(g, n):
        return f"t{g % G}_{n % N}"

    track_src, track_tgt = {}, {}
    for g in range(G):
        for n in range(N):
            track_src[tid(g, n)] = gname[g]
            track_tgt[tid(g, n)] = gname[(g + k * n) % G]
    vtab, itab, idtab, lwtab, rwtab, sigtab = {}, {}, {}, {}, {}, {}
    for g in range(G):
        idtab[gname[g]] = tid(g, 0)
        for n in range(N):
            t = tid(g, n)
            itab[t] = tid(g + k * n, -n)
            for m in range(N):
                vtab[(tid(g + k * n, m), t)] = tid(g, n + m)
            for h in range(G):
                lwtab[(gname[h], t)] = tid(h + g, pow(a, h, N) * n)
                rwtab[(t, gname[h])] = tid(g + h, n)
        if D.ngens:
            for x in range(order):
                sigtab[(gname[g], (x,))] = tid(g, x * gen)
        else:
            sigtab[(gname[g], ())] = tid(g, 0)
    proj = {gname[g]: cname[rep(g)] for g in range(G)}
    return TableExtension(name or f"crossed({G},{N},{k},{a})", base, system, under, proj,
                          track_src, track_tgt, vtab, itab, idtab, lwtab, rwtab, sigtab)


def split_table(c: FinCategory, d: NaturalSystem, name: str = "") -> TableExtension:
    """The split extension of ``c`` by a finite natural system: maps are the
    morphisms of ``c`` and every track is a self-track ``f~x`` with ``x`` in ``D(f)``."""
    def tid(f, x):
        return f"{f}~{','.join(map(str, x))}"

    track_src, track_tgt = {}, {}
    vtab, itab, idtab, lwtab, rwtab, sigtab = {}, {}, {}, {}, {}, {}
    elems = {f: list(d.groups[f].elements()) for f in c.morphisms}
    for f in c.morphisms:
        G = d.groups[f]
        idtab[f] = tid(f, G.zero())
        for x in elems[f]:
            t = tid(f, x)
            track_src[t] = track_tgt[t] = f
            sigtab[(f, x)] = t
            itab[t] = tid(f, G.neg(x))
            for y in elems[f]:
                vtab[(tid(f, y), t)] = tid(f, G.add(x, y))
            for kk in c.morphisms:
                if c.composable(kk, f):
                    lwtab[(kk, t)] = tid(c.comp(kk, f), d.left_act(kk, f, x))
            for h in c.morphisms:
                if c.composable(f, h):
                    rwtab[(t, h)] = tid(c.comp(f, h), d.right_act(f, h, x))
    return TableExtension(name or f"split({c.name})", c, d, c, {f: f for f in c.morphisms},
                          track_src, track_tgt, vtab, itab, idtab, lwtab, rwtab, sigtab)


def dualize(ext) -> TableExtension:
    """Reverse all maps: ``C^op`` with pushes and pulls exchanged and the two
    whiskerings swapped.  Tracks keep their direction."""
    if not isinstance(ext, TableExtension):
        raise TrackError("dualize needs a table extension; export a finite table first")
    base_op = ext.base.opposite()
    under_op = ext.underlying.opposite()
    name = ext.name[:-3] if ext.name.endswith("^op") else ext.name + "^op"
    return TableExtension(
        name, base_op, opposite_system(ext.system, base_op), under_op, dict(ext.proj),
        dict(ext.track_src), dict(ext.track_tgt), dict(ext.vtab), dict(ext.itab), dict(ext.idtab),
        {(h, a): t for (a, h), t in ext.rwtab.items()},
        {(a, k): t for (k, a), t in ext.lwtab.items()},
        dict(ext.sigtab), ext.zero_object)


# -- pasting -------------------------------------------------------------------

@dataclass
class PastingScheme:
    """A straight-line program of track operations.

    ``inputs`` maps names to tracks.  Each step is one of
    ``("vcomp", x, y)`` (``y`` after ``x``), ``("inv", x)``,
    ``("lwhisk", map, x)``, ``("rwhisk", x, map)``; ``x`` and ``y`` are
    input names or indices of earlier steps.  The result is the last step
    (or the only input when there are no steps).
    """

    inputs: dict[str, Any]
    steps: list[tuple] = field(default_factory=list)

    def add(self, *step) -> int:
        self.steps.append(tuple(step))
        return len(self.steps) - 1


def paste(ext, scheme: PastingScheme):
    regs: list = []

    def get(ref, k):
        if isinstance(ref, int):
            if not 0 <= ref < len(regs):
                raise PastingError(f"step {k}: reference to step {ref} which is not yet computed")
            return regs[ref]
        if ref not in scheme.inputs:
            raise PastingError(f"step {k}: unknown input {ref!r}")
        return scheme.inputs[ref]

    for k, step in enumerate(scheme.steps):
        op = step[0]
        try:
            if op == "vcomp":
                regs.append(ext.vcomp(get(step[2], k), get(step[1], k)))
            elif op == "inv":
                regs.append(ext.inv(get(step[1], k)))
            elif op == "lwhisk":
                regs.append(ext.lwhisk(step[1], get(step[2], k)))
            elif op == "rwhisk":
                regs.append(ext.rwhisk(get(step[1], k), step[2]))
            else:
                raise PastingError(f"step {k}: unknown operation {op!r}")
        except PastingError:
            raise
        except (TrackError, ValueError) as exc:
            raise PastingError(f"step {k} ({op}) does not type-check: {exc}") from None
    if regs:
        return regs[-1]
    if len(scheme.inputs) != 1:
        raise PastingError("an empty scheme needs exactly one input")
    return next(iter(scheme.inputs.values()))


# -- verification ----------------------------------------------------------------

def verify_linear_extension(ext, samples: int = 200, seed: int = 0) -> Report:
    if isinstance(ext, TableExtension):
        return _verify_table(ext)
    return _verify_split(ext, samples, seed)


def _verify_table(ext: TableExtension) -> Report:
    rep = Report(f"linear track extension {ext.name}")
    rep.check("table size caps", len(ext.underlying.morphisms) <= TABLE_MORPHISM_CAP
              and all((g.order() or 0) <= TABLE_GROUP_CAP for g in ext.system.groups.values()),
              {"morphisms": len(ext.underlying.morphisms)})
    for label, r in (("base category: ", validate_category(ext.base)),
                     ("maps: ", validate_category(ext.underlying)),
                     ("natural system: ", validate_natural_system(ext.system))):
        rep.merge(r, label)
    F = Functor(ext.underlying, ext.base,
                {o: o for o in ext.underlying.objects}, ext.proj)
    if set(ext.underlying.objects) == set(ext.base.objects):
        rep.merge(validate_functor(F), "projection: ")
    if not rep.ok:
        return rep
    E = ext.underlying
    mors = E.morphisms
    tracks = ext.tracks
    src, tgt = ext.track_src, ext.track_tgt
    # tracks exist exactly between maps with equal projection
    hom_pairs = {(src[t], tgt[t]) for t in tracks}
    for f in mors:
        for g in mors:
            if E.src[f] == E.src[g] and E.tgt[f] == E.tgt[g]:
                rep.check("tracks exist iff projections agree",
                          ((f, g) in hom_pairs) == (ext.proj[f] == ext.proj[g]), [f, g])
    # groupoid laws
    for a in tracks:
        i0, i1 = ext.idtab[src[a]], ext.idtab[tgt[a]]
        rep.check("identity tracks are units", ext.vtab.get((a, i0)) == a and ext.vtab.get((i1, a)) == a, a)
        b = ext.itab.get(a)
        ok = b is not None and src[b] == tgt[a] and tgt[b] == src[a]
        ok = ok and ext.vtab.get((b, a)) == i0 and ext.vtab.get((a, b)) == i1
        rep.check("inverses", ok, a)
    by_src: dict[str, list[str]] = {}
    for t in tracks:
        by_src.setdefault(src[t], []).append(t)
    for a in tracks:
        for b in by_src.get(tgt[a], []):
            ba = ext.vtab.get((b, a))
            rep.check("vertical composition is typed",
                      ba is not None and src[ba] == src[a] and tgt[ba] == tgt[b], [a, b])
            for c in by_src.get(tgt[b], []):
                rep.check("vertical associativity",
                          ext.vtab[(c, ba)] == ext.vtab[(ext.vtab[(c, b)], a)], [a, b, c])
    if not rep.ok:
        return rep
    # whiskers
    for a in tracks:
        for k in mors:
            if not E.composable(k, src[a]):
                continue
            ka = ext.lwtab.get((k, a))
            ok = ka is not None and src[ka] == E.comp(k, src[a]) and tgt[ka] == E.comp(k, tgt[a])
            rep.check("left whiskers are typed", ok, [k, a])
        for h in mors:
            if not E.composable(src[a], h):
                continue
            ah = ext.rwtab.get((a, h))
            ok = ah is not None and src[ah] == E.comp(src[a], h) and tgt[ah] == E.comp(tgt[a], h)
            rep.check("right whiskers are typed", ok, [a, h])
    if not rep.ok:
        return rep
    for a in tracks:
        f = src[a]
        rep.check("left whisker by identity", ext.lwtab[(E.identities[E.tgt[f]], a)] == a, a)
        rep.check("right whisker by identity", ext.rwtab[(a, E.identities[E.src[f]])] == a, a)
        for k in mors:
            if not E.composable(k, f):
                continue
            rep.check("left whisker preserves identities",
                      ext.lwtab[(k, ext.idtab[f])] == ext.idtab[E.comp(k, f)], [k, f])
            for k2 in mors:
                if E.composable(k2, k):
                    rep.check("left whiskers compose",
                              ext.lwtab[(k2, ext.lwtab[(k, a)])] == ext.lwtab[(E.comp(k2, k), a)], [k2, k, a])
            for h in mors:
                if E.composable(f, h):
                    rep.check("whiskers commute",
                              ext.lwtab[(k, ext.rwtab[(a, h)])] == ext.rwtab[(ext.lwtab[(k, a)], h)], [k, a, h])
        for h in mors:
            if not E.composable(f, h):
                continue
            for h2 in mors:
                if E.composable(h, h2):
                    rep.check("right whiskers compose",
                              ext.rwtab[(ext.rwtab[(a, h)], h2)] == ext.rwtab[(a, E.comp(h, h2))], [a, h, h2])
        for b in by_src.get(tgt[a], []):
            for k in mors:
                if E.composable(k, f):
                    rep.check("left whisker preserves vertical composition",
                              ext.lwtab[(k, ext.vtab[(b, a)])] == ext.vtab[(ext.lwtab[(k, b)], ext.lwtab[(k, a)])],
                              [k, a, b])
            for h in mors:
                if E.composable(f, h):
                    rep.check("right whisker preserves vertical composition",
                              ext.rwtab[(ext.vtab[(b, a)], h)] == ext.vtab[(ext.rwtab[(b, h)], ext.rwtab[(a, h)])],
                              [a, b, h])
    # interchange: a: u => u2, b: v => v2 with v o u defined
    for a in tracks:
        u, u2 = src[a], tgt[a]
        for b in tracks:
            v, v2 = src[b], tgt[b]
            if not E.composable(v, u):
                continue
            lhs = ext.vtab[(ext.lwtab[(v2, a)], ext.rwtab[(b, u)])]
            rhs = ext.vtab[(ext.rwtab[(b, u2)], ext.lwtab[(v, a)])]
            rep.check("interchange law", lhs == rhs, [a, b])
    # sigma axioms
    D = ext.system
    for f in mors:
        pf = ext.proj[f]
        G = D.groups[pf]
        auts = sorted(ext.tracks_between(f, f))
        images = [ext.sigtab.get((f, x)) for x in G.elements()]
        rep.check("sigma is a bijection onto self-tracks",
                  None not in images and sorted(images) == auts, f)
        if None in images:
            continue
        for x in G.elements():
            for y in G.elements():
                rep.check("sigma is additive",
                          ext.vtab[(ext.sigtab[(f, x)], ext.sigtab[(f, y)])] == ext.sigtab[(f, G.add(x, y))],
                          [f, list(x), list(y)])
        for H in by_src.get(f, []):
            g = tgt[H]
            for x in G.elements():
                rep.check("sigma commutes with tracks",
                          ext.vtab[(ext.sigtab[(g, x)], H)] == ext.vtab[(H, ext.sigtab[(f, x)])],
                          [f, list(x), H])
        for x in G.elements():
            for g in mors:
                if E.composable(f, g):
                    fg = E.comp(f, g)
                    y = D.right_act(pf, ext.proj[g], x)
                    rep.check("sigma is natural for precomposition",
                              ext.rwtab[(ext.sigtab[(f, x)], g)] == ext.sigtab[(fg, y)], [f, list(x), g])
                if E.composable(g, f):
                    gf = E.comp(g, f)
                    y = D.left_act(ext.proj[g], pf, x)
                    rep.check("sigma is natural for postcomposition",
                              ext.lwtab[(g, ext.sigtab[(f, x)])] == ext.sigtab[(gf, y)], [g, f, list(x)])
    if ext.zero_object is None:
        rep.not_applicable("zero object is strict", "no zero object declared")
    else:
        z = ext.zero_object
        for o in E.objects:
            rep.check("zero object is strict",
                      len(E.hom(z, o)) == 1 and len(E.hom(o, z)) == 1, o)
    return rep


def _verify_split(model: SplitModel, samples: int, seed: int) -> Report:
    rep = Report(f"split linear track extension over {model.M}", seed=seed)
    rng = random.Random(seed)
    R = model.max_rank
    M = model.M

    def rr():
        return rng.randint(0, R)

    for _ in range(samples):
        n, m, q, r = rr(), rr(), rr(), rr()
        u = model.random_hom(rng, n, m)
        u2 = model.random_rebase(rng, u)
        u3 = model.random_rebase(rng, u)
        v = model.random_hom(rng, m, q)
        v2 = model.random_rebase(rng, v)
        w = model.random_hom(rng, q, r)
        h = model.random_hom(rng, r, n)
        a = model.track(u, u2, random_mmatrix(rng, M, m, n))
        b = model.track(u2, u3, random_mmatrix(rng, M, m, n))
        c = model.track(v, v2, random_mmatrix(rng, M, q, m))
        eq = model.track_eq
        rep.check("projection is a functor",
                  model.p(hom_compose(v, u)) == model.p(v) @ model.p(u), [n, m, q])
        rep.check("identity tracks are units",
                  eq(model.vcomp(a, model.idtrack(u)), a) and eq(model.vcomp(model.idtrack(u2), a), a))
        rep.check("inverses", eq(model.vcomp(model.inv(a), a), model.idtrack(u)))
        rep.check("whiskers preserve vertical composition",
                  eq(model.lwhisk(v, model.vcomp(b, a)), model.vcomp(model.lwhisk(v, b), model.lwhisk(v, a)))
                  and eq(model.rwhisk(model.vcomp(b, a), h), model.vcomp(model.rwhisk(b, h), model.rwhisk(a, h))))
        rep.check("whiskers compose",
                  eq(model.lwhisk(w, model.lwhisk(v, a)), model.lwhisk(hom_compose(w, v), a))
                  and eq(model.rwhisk(model.rwhisk(c, u), h), model.rwhisk(c, hom_compose(u, h))))
        rep.check("whiskers commute",
                  eq(model.lwhisk(v, model.rwhisk(a, h)), model.rwhisk(model.lwhisk(v, a), h)))
        lhs = model.vcomp(model.lwhisk(v2, a), model.rwhisk(c, u))
        rhs = model.vcomp(model.rwhisk(c, u2), model.lwhisk(v, a))
        rep.check("interchange law", eq(lhs, rhs), [n, m, q])
        x = random_mmatrix(rng, M, m, n)
        y = random_mmatrix(rng, M, m, n)
        s = model.sigma(u, x)
        rep.check("sigma is additive", eq(model.vcomp(s, model.sigma(u, y)), model.sigma(u, x + y)))
        rep.check("sigma commutes with tracks",
                  eq(model.vcomp(model.sigma(u2, x), a), model.vcomp(a, model.sigma(u, x))))
        rep.check("sigma is natural for precomposition",
                  eq(model.rwhisk(s, h), model.sigma(hom_compose(u, h), x.rmul(abelianize(h)))))
        rep.check("sigma is natural for postcomposition",
                  eq(model.lwhisk(v, s), model.sigma(hom_compose(v, u), x.lmul(abelianize(v)))))
    for n in range(R + 1):
        z_in = zero_hom(0, n)
        z_out = zero_hom(n, 0)
        rep.check("zero object is strict",
                  model.track(z_in, z_in).coords.shape == (n, 0)
                  and model.track(z_out, z_out).coords.shape == (0, n)
                  and len(model.homs(0, n, 1)) == 1 and len(model.homs(n, 0, 1)) == 1, n)
    return rep


def verify_strict_coproducts(ext, samples: int = 100, seed: int = 0) -> Report:
    rep = Report("strict coproducts", seed=seed)
    if isinstance(ext, TableExtension):
        rep.not_applicable("coproduct structure", "table model without declared coproducts")
        return rep
    model: SplitModel = ext
    rng = random.Random(seed)
    R = model.max_rank
    for _ in range(samples):
        n1 = rng.randint(0, R)
        n2 = rng.randint(0, R - n1) if R > n1 else 0
        m = rng.randint(0, R)
        u1 = model.random_hom(rng, n1, m)
        u2 = model.random_hom(rng, n2, m)
        u = copairing([u1, u2]) if n1 + n2 else zero_hom(0, m)
        inc1 = injection_hom(n1, n1 + n2, list(range(1, n1 + 1)))
        inc2 = injection_hom(n2, n1 + n2, list(range(n1 + 1, n1 + n2 + 1)))
        # Psi on maps: restriction along the inclusions is inverse to copairing
        rep.check("maps out of a sum are determined by their restrictions",
                  hom_compose(u, inc1) == u1 and hom_compose(u, inc2) == u2, [n1, n2, m])
        if n1 + n2:
            a1 = model.track(u1, model.random_rebase(rng, u1), random_mmatrix(rng, model.M, m, n1))
            a2 = model.track(u2, model.random_rebase(rng, u2), random_mmatrix(rng, model.M, m, n2))
            a = model.copair_track([a1, a2])
            rep.check("tracks out of a sum are determined by their restrictions",
                      model.track_eq(model.rwhisk(a, inc1), a1) and model.track_eq(model.rwhisk(a, inc2), a2),
                      [n1, n2, m])
        # sum tracks restrict to their components; cross restrictions are trivial
        k1, k2 = rng.randint(1, R), rng.randint(1, R)
        h1 = model.random_hom(rng, 1, k1)
        h2 = model.random_hom(rng, 1, k2)
        t1 = model.random_track(rng, h1)
        t2 = model.random_track(rng, h2)
        s = model.sum_track([t1, t2])
        ok = True
        for e in (1, 2):
            for g in range(1, k1 + k2 + 1):
                piece = model.restrict(s, e, g).coords
                own = t1 if e == 1 else t2
                off = 0 if e == 1 else k1
                if off < g <= off + own.coords.shape[0]:
                    ok = ok and piece == own.coords.block(g - off - 1, g - off, 0, 1)
                else:
                    ok = ok and piece.is_zero()
        rep.check("sum tracks restrict to their components", ok, [k1, k2])
    return rep


def homotopy_quotient(ext):
    """Identify maps joined by a track.  Split models give the matrix category."""
    if not isinstance(ext, TableExtension):
        return MatrixCategory(ext.max_rank)
    E = ext.underlying
    parent = {f: f for f in E.morphisms}

    def find(f):
        while parent[f] != f:
            parent[f] = parent[parent[f]]
            f = parent[f]
        return f

    for t in ext.tracks:
        a, b = find(ext.track_src[t]), find(ext.track_tgt[t])
        if a != b:
            parent[max(a, b)] = min(a, b)
    cls = {f: find(f) for f in E.morphisms}
    reps = sorted(set(cls.values()))
    table = {}
    for (f, g), h in E.table.items():
        table[(cls[f], cls[g])] = cls[h]
    return FinCategory.build(E.objects, [(r, E.src[r], E.tgt[r]) for r in reps],
                             {o: cls[E.identities[o]] for o in E.objects}, table,
                             (ext.name + ".ho") if ext.name else "")
