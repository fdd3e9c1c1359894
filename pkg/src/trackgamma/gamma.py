"""Pseudofunctors out of the class-2 nilpotent theory, interchange tracks and
the canonical Gamma-structure, worked out in split models.

Conventions.  A nil2 hom ``alpha: F_n -> F_m`` with abelianization ``A``
(an ``m x n`` integer matrix) acts on an object ``X`` of rank ``a`` by
substitution, ``F_X(alpha): X^{v n} -> X^{v m}`` with abelianization
``A (x) I_a``.  For ``f: X -> Y`` (ranks ``a -> b``) the n-fold sum is
``(f)_n`` with abelianization ``I_n (x) A_f``.  The interchange track

    Gamma_alpha: (f)_m F_X(alpha) => F_Y(alpha) (f)_n

is an ``mb x na`` matrix over ``M``.  Compositors ``phi_{beta,alpha}:
F(beta) F(alpha) => F(beta alpha)`` and unitors ``phi_n: F(1_n) => 1`` are
matrices of the matching shapes.  All pastings reduce to sums of such
matrices multiplied by abelianizations.
"""
from __future__ import annotations

import hashlib
import itertools
import random
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from . import intlinalg as il
from .abelian import AbGroup, MMatrix
from .cohomology import SectionData, delta_track, random_matrix_chain
from .nilgroup import (Nil2Element, Nil2Hom, abelianize, block_sum, copairing, elements_up_to,
                       fold_hom, hom_compose, identity_hom, inclusion_hom, injection_hom,
                       power_hom, product_hom, random_hom, retraction_hom, zero_hom)
from .reports import Report
from .trackcat import (IntMat, PastingScheme, SplitModel, SplitTrack, TableExtension, TrackError, paste,
                       random_mmatrix)


class StructureError(ValueError):
    pass


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=int).astype(object)


def kron(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    out = np.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]), dtype=object)
    r, c = b.shape
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            if a[i, j]:
                out[i * r:(i + 1) * r, j * c:(j + 1) * c] = a[i, j] * b
    return out


def _seeded(seed, *parts) -> random.Random:
    h = hashlib.sha256(repr((seed,) + parts).encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


def _memo(cache: dict, lock: threading.Lock, key, compute):
    with lock:
        if key in cache:
            return cache[key]
    val = compute()
    with lock:
        cache.setdefault(key, val)
        return cache[key]


_retraction = lru_cache(maxsize=None)(retraction_hom)
_inclusion = lru_cache(maxsize=None)(inclusion_hom)
_identity = lru_cache(maxsize=None)(identity_hom)


def fold_sum(f: Nil2Hom, n: int) -> Nil2Hom:
    """``(f)_n = f v ... v f``."""
    if n == 0:
        return Nil2Hom(0, 0, ())
    return block_sum([f] * n)


def substitute(alpha: Nil2Hom, a: int) -> Nil2Hom:
    """``F_X(alpha)`` for ``X`` of rank ``a``: generator ``(j, i)`` of ``X^{v n}``
    goes to ``alpha(x_j)`` with ``x_c`` read as generator ``(c, i)``."""
    if a == 1:
        return alpha
    n, m = alpha.source_rank, alpha.target_rank
    shifts = [injection_hom(m, m * a, [c * a + i + 1 for c in range(m)]) for i in range(a)]
    ims = [shifts[i](alpha.images[j]) if m else Nil2Element.identity(0)
           for j in range(n) for i in range(a)]
    return Nil2Hom(n * a, m * a, tuple(ims))


def is_inclusion(alpha: Nil2Hom) -> bool:
    """Images are distinct generators."""
    seen = set()
    for im in alpha.images:
        if any(im.comm) or sorted(im.gen).count(1) != 1 or any(e not in (0, 1) for e in im.gen):
            return False
        seen.add(im.gen.index(1))
    return len(seen) == alpha.source_rank


def is_projection(alpha: Nil2Hom) -> bool:
    """Images are generators or the unit, each generator hit exactly once."""
    hit = []
    for im in alpha.images:
        if any(im.comm) or any(e not in (0, 1) for e in im.gen) or sum(im.gen) > 1:
            return False
        if sum(im.gen) == 1:
            hit.append(im.gen.index(1))
    return sorted(hit) == list(range(alpha.target_rank))


def power_of(alpha: Nil2Hom) -> int | None:
    if alpha.source_rank == 1 and alpha.target_rank == 1:
        return alpha.images[0].gen[0]
    return None


# -- pseudofunctors --------------------------------------------------------------

class Pseudofunctor:
    """A pseudofunctor from the nil2 theory into a split model, sending ``Z``
    to an object of rank ``rank``.

    ``maps(alpha)`` gives the map ``F(alpha)``, ``compositor(beta, alpha)`` the
    coordinates of ``F(beta) F(alpha) => F(beta alpha)`` and ``unitor(n)`` those
    of ``F(1_n) => 1``.  Values are memoized.
    """

    def __init__(self, model: SplitModel, rank: int, maps: Callable, compositor: Callable,
                 unitor: Callable, name: str = "", coproduct_preserving: bool = True):
        self.model = model
        self.M = model.M
        self.rank = rank
        self._maps = maps
        self._comp = compositor
        self._unit = unitor
        self.name = name
        self.coproduct_preserving = coproduct_preserving
        self._cache: dict = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Pseudofunctor({self.name or 'unnamed'}, rank={self.rank}, M={self.M})"

    def __call__(self, alpha: Nil2Hom) -> Nil2Hom:
        return _memo(self._cache, self._lock, ("map", alpha), lambda: self._maps(alpha))

    def ab(self, alpha: Nil2Hom) -> np.ndarray:
        return _memo(self._cache, self._lock, ("ab", alpha), lambda: abelianize(self(alpha)))

    def compositor(self, beta: Nil2Hom, alpha: Nil2Hom) -> MMatrix:
        if beta.source_rank != alpha.target_rank:
            raise TrackError("compositor of non-composable homs")
        return _memo(self._cache, self._lock, ("comp", beta, alpha), lambda: self._comp(beta, alpha))

    def unitor(self, n: int) -> MMatrix:
        return _memo(self._cache, self._lock, ("unit", n), lambda: self._unit(n))

    def compositor_track(self, beta, alpha) -> SplitTrack:
        return self.model.track(self.model.comp(self(beta), self(alpha)), self(hom_compose(beta, alpha)),
                                self.compositor(beta, alpha))

    def unitor_track(self, n: int) -> SplitTrack:
        return self.model.track(self(identity_hom(n)), identity_hom(n * self.rank), self.unitor(n))

    def zeros(self, m: int, n: int) -> MMatrix:
        return MMatrix.zeros(self.M, m * self.rank, n * self.rank)

    def is_reduced(self, ranks: Iterable[int] = (0, 1, 2, 3)) -> bool:
        return all(self.unitor(n).is_zero() for n in ranks)


def strict_cogroup(model: SplitModel, rank: int = 1) -> Pseudofunctor:
    """``F_X`` by substitution, all compositors and unitors trivial."""
    M = model.M
    return Pseudofunctor(
        model, rank, lambda al: substitute(al, rank),
        lambda be, al: MMatrix.zeros(M, be.target_rank * rank, al.source_rank * rank),
        lambda n: MMatrix.zeros(M, n * rank, n * rank),
        name=f"F_X(rank {rank})")


def reduce_pseudofunctor(F: Pseudofunctor, xi: Callable[[Nil2Hom], SplitTrack], name: str = ""):
    """The pseudofunctor ``F^xi`` with ``F^xi(alpha) = target of xi_alpha`` and
    the transformation ``t_xi: F => F^xi`` whose tracks are the ``xi_alpha``.

    Compositors ``xi_{beta alpha} [] phi_{beta,alpha} [] (xi_beta o xi_alpha)^-1``,
    unitors ``phi_n [] xi_{1_n}^-1``.
    """
    def xi_checked(alpha):
        t = xi(alpha)
        if t.src != F(alpha):
            raise TrackError(f"xi at {alpha} does not start at F(alpha)")
        return t

    cache: dict = {}
    lock = threading.Lock()

    def X(alpha) -> SplitTrack:
        return _memo(cache, lock, alpha, lambda: xi_checked(alpha))

    def maps(alpha):
        return X(alpha).tgt

    def comp(beta, alpha):
        return (X(hom_compose(beta, alpha)).coords + F.compositor(beta, alpha)
                - X(beta).coords.rmul(F.ab(alpha)) - X(alpha).coords.lmul(abelianize(maps(beta))))

    def unit(n):
        return F.unitor(n) - X(identity_hom(n)).coords

    G = Pseudofunctor(F.model, F.rank, maps, comp, unit, name or f"{F.name}^xi",
                      F.coproduct_preserving)
    t = PseudoNatTrans(F, G, lambda n: identity_hom(n * F.rank), lambda alpha: X(alpha).coords,
                       name="t_xi")
    return G, t


def entry_family(F: Pseudofunctor, h: Callable[[int], MMatrix]) -> Callable[[Nil2Hom], SplitTrack]:
    """Self-tracks ``xi_alpha`` of ``F(alpha)`` whose ``(g, c)`` block is
    ``h(A[g, c])``.  With ``h(0) = h(1) = 0`` the family is trivial on sums of
    inclusions, projections and folds, so coproducts are preserved."""
    a = F.rank

    def xi(alpha):
        A = abelianize(alpha)
        m, n = A.shape
        rows = [MMatrix.hstack(F.M, [h(int(A[g, c])) for c in range(n)], a) for g in range(m)]
        coords = MMatrix.vstack(F.M, rows, n * a)
        return F.model.track(F(alpha), F(alpha), coords)

    return xi


def seeded_entry_map(M: AbGroup, rank: int, seed: int, bound: int = 3) -> Callable[[int], MMatrix]:
    """A deterministic ``h: Z -> M^{rank x rank}`` with ``h(0) = h(1) = 0``."""
    def h(k: int) -> MMatrix:
        if k in (0, 1):
            return MMatrix.zeros(M, rank, rank)
        return random_mmatrix(_seeded(seed, "h", k), M, rank, rank, bound)
    return h


def perturbed_cogroup(model: SplitModel, rank: int = 1, seed: int = 0) -> Pseudofunctor:
    """A reduced, coproduct-preserving weak cogroup structure on an object of
    the given rank with nontrivial compositors."""
    F = strict_cogroup(model, rank)
    G, _ = reduce_pseudofunctor(F, entry_family(F, seeded_entry_map(model.M, rank, seed)),
                                name=f"F_X(rank {rank}, seed {seed})")
    return G


def corrupt_compositor(F: Pseudofunctor, beta: Nil2Hom, alpha: Nil2Hom, delta: MMatrix) -> Pseudofunctor:
    """``F`` with ``phi_{beta,alpha}`` shifted by ``delta``."""
    def comp(b, a):
        base = F.compositor(b, a)
        return base + delta if (b, a) == (beta, alpha) else base
    return Pseudofunctor(F.model, F.rank, F, comp, F.unitor, F.name + "*", F.coproduct_preserving)


# -- pseudo natural transformations and homotopies -----------------------------------

class PseudoNatTrans:
    """``T: F => G`` with components ``T_n: F(n) -> G(n)`` and tracks
    ``t_alpha: T_m F(alpha) => G(alpha) T_n`` (coordinates)."""

    def __init__(self, source: Pseudofunctor, target: Pseudofunctor, component: Callable[[int], Nil2Hom],
                 tracks: Callable[[Nil2Hom], MMatrix], name: str = "", coproduct_preserving: bool = True):
        self.source = source
        self.target = target
        self._component = component
        self._tracks = tracks
        self.name = name
        self.coproduct_preserving = coproduct_preserving
        self._cache: dict = {}
        self._lock = threading.Lock()

    def component(self, n: int) -> Nil2Hom:
        return _memo(self._cache, self._lock, ("c", n), lambda: self._component(n))

    def ab(self, n: int) -> np.ndarray:
        return abelianize(self.component(n))

    def coords(self, alpha: Nil2Hom) -> MMatrix:
        return _memo(self._cache, self._lock, ("t", alpha), lambda: self._tracks(alpha))

    def track(self, alpha: Nil2Hom) -> SplitTrack:
        model = self.source.model
        u = model.comp(self.component(alpha.target_rank), self.source(alpha))
        v = model.comp(self.target(alpha), self.component(alpha.source_rank))
        return model.track(u, v, self.coords(alpha))

    @property
    def evaluation(self) -> Nil2Hom:
        return self.component(1)

    def then(self, other: "PseudoNatTrans") -> "PseudoNatTrans":
        """``other o self`` as transformations ``F => G => K``."""
        if other.source is not self.target:
            raise StructureError("transformations do not compose")
        return PseudoNatTrans(
            self.source, other.target,
            lambda n: hom_compose(other.component(n), self.component(n)),
            lambda al: (self.coords(al).lmul(other.ab(al.target_rank))
                        + other.coords(al).rmul(self.ab(al.source_rank))),
            name=f"{other.name}.{self.name}")


def identity_transformation(F: Pseudofunctor) -> PseudoNatTrans:
    return PseudoNatTrans(F, F, lambda n: identity_hom(n * F.rank),
                          lambda al: F.zeros(al.target_rank, al.source_rank), name="id")


@dataclass
class PseudoHomotopy:
    """Tracks ``H_n: T_n => S_n`` between transformations ``T, S: F => G``."""

    source: PseudoNatTrans
    target: PseudoNatTrans
    fn: Callable[[int], MMatrix]

    def at(self, n: int) -> MMatrix:
        return self.fn(n)

    def track(self, n: int) -> SplitTrack:
        return self.source.source.model.track(self.source.component(n), self.target.component(n), self.at(n))


def transformations_equal(T: PseudoNatTrans, S: PseudoNatTrans, alphas: Iterable[Nil2Hom],
                          ranks: Iterable[int] = (0, 1, 2, 3)) -> bool:
    return (all(T.component(n) == S.component(n) for n in ranks)
            and all(T.coords(al) == S.coords(al) for al in alphas))


# -- verifiers -------------------------------------------------------------------

def _hom_label(al: Nil2Hom) -> str:
    return str(al)


EXHAUSTIVE_SAMPLES = 24


def verify_pseudofunctor(F, samples=None, seed: int = 0, ranks: Sequence[int] = (1, 2)) -> Report:
    """Coherence of a pseudofunctor.

    For split-model pseudofunctors: unit and associativity conditions on
    composable samples, abelianization ``A (x) I``, and with the coproduct
    flag the coproduct conditions.  For a section ``(t, H)`` of a table
    extension (a ``SectionData``): exhaustive unit and associativity checks.
    """
    if isinstance(F, SectionData):
        return _verify_section(F)
    rng = random.Random(seed)
    rep = Report(f"pseudofunctor {F.name}", seed=seed)
    if samples is None:
        samples = sample_homs(rng, ranks, 12)
    rep.not_applicable("tracks of the theory are preserved",
                       "the nil2 theory has identity tracks only")
    for al in samples:
        n, m = al.source_rank, al.target_rank
        A = abelianize(al)
        rep.check("F(alpha) has abelianization A (x) I", np.array_equal(F.ab(al), kron(A, eye(F.rank))),
                  _hom_label(al))
        rep.check("unit: phi_{1,alpha} = phi_m F(alpha)",
                  F.compositor(identity_hom(m), al) == F.unitor(m).rmul(F.ab(al)), _hom_label(al))
        rep.check("unit: phi_{alpha,1} = F(alpha) phi_n",
                  F.compositor(al, identity_hom(n)) == F.unitor(n).lmul(F.ab(al)), _hom_label(al))
    triples = composable_triples(rng, samples, ranks)
    if len(samples) <= EXHAUSTIVE_SAMPLES:
        # small sample sets are also checked on every composable triple they contain
        triples += [(ga, be, al) for al in samples for be in samples for ga in samples
                    if be.source_rank == al.target_rank and ga.source_rank == be.target_rank]
    for ga, be, al in triples:
        lhs = F.compositor(hom_compose(ga, be), al) + F.compositor(ga, be).rmul(F.ab(al))
        rhs = F.compositor(ga, hom_compose(be, al)) + F.compositor(be, al).lmul(F.ab(ga))
        rep.check("associativity of compositors", lhs == rhs,
                  {"gamma": str(ga), "beta": str(be), "alpha": str(al),
                   "difference": (lhs - rhs).to_json()})
    if F.coproduct_preserving:
        a = F.rank
        for n in ranks:
            for e in range(1, n + 1):
                inc = inclusion_hom(n, e)
                rep.check("F(i_e) is the coproduct inclusion",
                          F(inc) == injection_hom(a, n * a, [(e - 1) * a + i + 1 for i in range(a)]),
                          {"n": n, "e": e})
            rep.check("unitor of a sum is the sum of unitors",
                      F.unitor(n) == MMatrix.block_diag(F.M, [F.unitor(1)] * n), n)
        for (b1, a1), (b2, a2) in _pairs_of_pairs(rng, samples, 6):
            bs, as_ = block_sum([b1, b2]), block_sum([a1, a2])
            rep.check("F preserves sums of maps", F(as_) == block_sum([F(a1), F(a2)]), [str(a1), str(a2)])
            rep.check("compositor of sums is the sum of compositors",
                      F.compositor(bs, as_) == MMatrix.block_diag(F.M, [F.compositor(b1, a1),
                                                                          F.compositor(b2, a2)]),
                      [str(b1), str(a1), str(b2), str(a2)])
    return rep


def _verify_section(s: SectionData, samples: int = 100, seed: int = 0) -> Report:
    if isinstance(s.ext, SplitModel):
        return _verify_split_section(s, samples, seed)
    ext: TableExtension = s.ext
    C = ext.base
    rep = Report(f"pseudofunctor section of {ext.name}")
    rep.not_applicable("tracks of the base are preserved", "the base category has identity tracks only")
    for f in C.morphisms:
        rep.check("p t = id", ext.p(s.lift(f)) == f, f)
        if C.is_identity(f):
            rep.check("t preserves identities", s.lift(f) == ext.identity(C.src[f]), f)
    for f in C.morphisms:
        for g in C.morphisms:
            if not C.composable(f, g):
                continue
            h = s.comp_track(f, g)
            tf, tg, tfg = s.lift(f), s.lift(g), s.lift(C.comp(f, g))
            rep.check("compositor is a track t(f) t(g) => t(fg)",
                      ext.track_src.get(h) == ext.comp(tf, tg) and ext.track_tgt.get(h) == tfg, [f, g])
            if C.is_identity(f) or C.is_identity(g):
                rep.check("unit: compositors at identities are identity tracks",
                          h == ext.idtrack(tfg), [f, g])
    for f in C.morphisms:
        for g in C.morphisms:
            if not C.composable(f, g):
                continue
            for h in C.morphisms:
                if C.composable(g, h):
                    d = delta_track(ext, s, f, g, h)
                    rep.check("associativity of compositors", d == ext.idtrack(s.lift(C.composite((f, g, h)))),
                              {"triple": [f, g, h], "value": list(ext.sigma_inv(s.lift(C.composite((f, g, h))), d))})
    return rep


def _verify_split_section(s: SectionData, samples: int, seed: int) -> Report:
    model: SplitModel = s.ext
    rng = random.Random(seed)
    rep = Report(f"pseudofunctor section of {model}", seed=seed)
    rep.not_applicable("tracks of the base are preserved", "the base category has identity tracks only")
    for _ in range(samples):
        f, g, h = random_matrix_chain(rng, 3, model.max_rank)
        wit = [str(f), str(g), str(h)]
        rep.check("p t = id", model.p(s.lift(f)) == f, str(f))
        rep.check("t preserves identities", s.lift(IntMat.identity(f.cols)) == model.identity(f.cols), f.cols)
        rep.check("unit: compositors at identities are identity tracks",
                  s.comp_track(IntMat.identity(f.rows), f).coords.is_zero()
                  and s.comp_track(f, IntMat.identity(f.cols)).coords.is_zero(), str(f))
        rep.check("associativity of compositors", delta_track(model, s, f, g, h).coords.is_zero(), wit)
    return rep


def verify_transformation(T: PseudoNatTrans, pairs: Iterable[tuple[Nil2Hom, Nil2Hom]],
                          ranks: Sequence[int] = (0, 1, 2, 3), seed: int | None = None) -> Report:
    """Composition, unit and coproduct conditions for a pseudo natural transformation."""
    F, G = T.source, T.target
    rep = Report(f"pseudo natural transformation {T.name}", seed=seed)
    for n in ranks:
        rep.check("unit condition", T.coords(identity_hom(n))
                  == F.unitor(n).lmul(T.ab(n)) - G.unitor(n).rmul(T.ab(n)), n)
        if T.coproduct_preserving:
            rep.check("components are sums of the evaluation", T.component(n) == fold_sum(T.evaluation, n), n)
    for be, al in pairs:
        q, n = be.target_rank, al.source_rank
        lhs = F.compositor(be, al).lmul(T.ab(q)) + T.coords(hom_compose(be, al))
        rhs = (T.coords(be).rmul(F.ab(al)) + T.coords(al).lmul(G.ab(be))
               + G.compositor(be, al).rmul(T.ab(n)))
        rep.check("composition condition", lhs == rhs,
                  {"beta": str(be), "alpha": str(al), "difference": (lhs - rhs).to_json()})
        if T.coproduct_preserving:
            s = block_sum([be, al]) if be.target_rank + al.target_rank <= 6 else None
            if s is not None:
                rep.check("tracks of sums are sums of tracks",
                          T.coords(s) == MMatrix.block_diag(F.M, [T.coords(be), T.coords(al)]),
                          [str(be), str(al)])
    return rep


def verify_homotopy(H: PseudoHomotopy, alphas: Iterable[Nil2Hom], ranks: Sequence[int] = (0, 1, 2, 3),
                    seed: int | None = None) -> Report:
    T, S = H.source, H.target
    F, G = T.source, T.target
    rep = Report("pseudo homotopy", seed=seed)
    for al in alphas:
        m, n = al.target_rank, al.source_rank
        lhs = S.coords(al)
        rhs = -H.at(m).rmul(F.ab(al)) + T.coords(al) + H.at(n).lmul(G.ab(al))
        rep.check("homotopy condition", lhs == rhs, {"alpha": str(al), "difference": (lhs - rhs).to_json()})
    for n in ranks:
        rep.check("coproduct condition: H_n = H_1 v ... v H_1",
                  H.at(n) == MMatrix.block_diag(F.M, [H.at(1)] * n), n)
    return rep


# -- sampling ---------------------------------------------------------------------

def sample_homs(rng: random.Random, ranks: Sequence[int], count: int, bound: int = 2) -> list[Nil2Hom]:
    out = []
    for n in ranks:
        for m in ranks:
            out.extend(random_hom(rng, n, m, bound) for _ in range(count // len(ranks) ** 2 + 1))
    return out


def structural_homs(max_rank: int = 3) -> list[Nil2Hom]:
    out = [identity_hom(n) for n in range(1, max_rank + 1)]
    for n in range(2, max_rank + 1):
        for e in range(1, n + 1):
            out.append(retraction_hom(n, e))
            out.append(inclusion_hom(n, e))
        out.append(product_hom(n))
        out.append(fold_hom(1, n))
    out.extend(power_hom(k) for k in (-3, -2, -1, 0, 2, 3))
    out.append(copairing([identity_hom(1), power_hom(-1)]))
    out.append(zero_hom(1, 1))
    return out


def composable_triples(rng, homs: Sequence[Nil2Hom], ranks: Sequence[int], count: int = 30, bound: int = 2):
    out = []
    for _ in range(count):
        al = rng.choice(list(homs))
        be = random_hom(rng, al.target_rank, rng.choice(list(ranks)), bound)
        ga = random_hom(rng, be.target_rank, rng.choice(list(ranks)), bound)
        out.append((ga, be, al))
    return out


def _pairs_of_pairs(rng, homs, count):
    out = []
    for _ in range(count):
        a1, a2 = rng.choice(homs), rng.choice(homs)
        b1 = random_hom(rng, a1.target_rank, rng.choice([1, 2]))
        b2 = random_hom(rng, a2.target_rank, rng.choice([1, 2]))
        out.append(((b1, a1), (b2, a2)))
    return out


# -- unique solutions of affine constraints ------------------------------------------

class UniqueSolver:
    """Solves affine equations ``P(X) = target`` in ``X in M^{r x c}`` whose
    linear part is a bijection.  The inverse of the linear part is computed
    once per key and memoized."""

    def __init__(self, M: AbGroup):
        self.M = M
        self._inv: dict = {}
        self._lock = threading.Lock()

    def _inverse(self, key, P, shape, out_shape, offset):
        rows, cols = shape
        M = self.M
        k = M.ngens
        cols_l = []
        for t in range(rows * cols * k):
            vec = [0] * (rows * cols * k)
            vec[t] = 1
            cols_l.append((P(MMatrix.from_flat(M, vec, rows, cols)) - offset).flat())
        L = [list(r) for r in zip(*cols_l)] if cols_l else [[] for _ in range(out_shape[0] * out_shape[1] * k)]
        src = list(M.moduli) * (rows * cols)
        dst = list(M.moduli) * (out_shape[0] * out_shape[1])
        if len(src) != len(dst):
            raise StructureError(f"constraint {key} is not square")
        ker = il.kernel_modular(L, src, dst)
        width = len(ker[0]) if ker and ker[0] else 0
        if any(ker[i][j] % d if d else ker[i][j] for j in range(width) for i, d in enumerate(src)):
            raise StructureError(f"constraint {key} has a non-injective linear part")
        inv = []
        for t in range(len(dst)):
            e = [0] * len(dst)
            e[t] = 1
            sol = il.solve_modular(L, e, src, dst)
            if sol is None:
                raise StructureError(f"constraint {key} has a non-surjective linear part")
            inv.append(sol)
        return [list(r) for r in zip(*inv)] if inv else []

    check_solutions = False

    def solve(self, key, P: Callable[[MMatrix], MMatrix], shape: tuple[int, int], target: MMatrix) -> MMatrix:
        M = self.M
        offset = P(MMatrix.zeros(M, *shape))
        inv = _memo(self._inv, self._lock, key, lambda: self._inverse(key, P, shape, target.shape, offset))
        rhs = (target - offset).flat()
        flat = [sum(int(c) * int(r) for c, r in zip(row, rhs)) for row in inv]
        X = MMatrix.from_flat(M, flat, *shape)
        if self.check_solutions and P(X) != target:
            raise StructureError(f"constraint {key}: solution does not satisfy the equation")
        return X


_solvers: dict = {}
_solvers_lock = threading.Lock()


def solver_for(M: AbGroup) -> UniqueSolver:
    with _solvers_lock:
        if M not in _solvers:
            _solvers[M] = UniqueSolver(M)
        return _solvers[M]


# -- interchange structures --------------------------------------------------------------

class InterchangeStructure:
    """Interchange tracks ``Gamma_alpha`` for a map ``f: X -> Y`` between weak
    cogroups, computed on demand.

    The canonical tracks are trivial on inclusions and projections, and are
    otherwise the unique solutions of the corestriction constraints
    ``Gamma_{r_g} [x] (Gamma_alpha [x] Gamma_{i_e}) = mu_{A[g,e]}``.  The
    numbers ``mu_k`` come from the additivity tracks, the negative track and
    the multiplication tracks.  ``overrides`` replaces individual tracks.
    """

    def __init__(self, f: Nil2Hom, source: Pseudofunctor, target: Pseudofunctor,
                 overrides: dict | None = None, name: str = ""):
        if source.model is not target.model:
            raise StructureError("source and target live in different models")
        if (f.source_rank, f.target_rank) != (source.rank, target.rank):
            raise StructureError(f"map of ranks {f.source_rank} -> {f.target_rank} between objects of ranks "
                                 f"{source.rank} -> {target.rank}")
        if not (source.is_reduced() and target.is_reduced()):
            raise StructureError("interchange tracks are built for reduced structures; reduce first")
        self.f = f
        self.X = source
        self.Y = target
        self.model = source.model
        self.M = source.M
        self.a, self.b = f.source_rank, f.target_rank
        self.Af = abelianize(f)
        self.overrides = dict(overrides or {})
        self.name = name or f"Gamma^{f}"
        self.is_gamma_structure = False
        self.parent: InterchangeStructure | None = None
        self.solver = solver_for(self.M)
        self._cache: dict = {}
        self._lock = threading.Lock()

    def with_overrides(self, overrides: dict) -> "InterchangeStructure":
        """The same structure with the listed tracks replaced; every other
        track is read from this one."""
        out = InterchangeStructure(self.f, self.X, self.Y, {**self.overrides, **overrides}, self.name + "'")
        out.parent = self
        out._cache = self._cache
        out._lock = self._lock
        return out

    def fsum_ab(self, n: int) -> np.ndarray:
        return _memo(self._cache, self._lock, ("fsum", n), lambda: kron(eye(n), self.Af))

    def zeros(self, m: int, n: int) -> MMatrix:
        return MMatrix.zeros(self.M, m * self.b, n * self.a)

    # pasting of interchange tracks
    def box(self, beta: Nil2Hom, alpha: Nil2Hom, g_beta: MMatrix, g_alpha: MMatrix) -> MMatrix:
        """``Gamma_beta [x] Gamma_alpha``: the pasting through ``phi^X_{beta,alpha}^-1``
        and ``phi^Y_{beta,alpha}``."""
        if beta.source_rank != alpha.target_rank:
            raise TrackError(f"cannot paste: {beta} does not compose with {alpha}")
        q, n = beta.target_rank, alpha.source_rank
        return (-self.X.compositor(beta, alpha).lmul(self.fsum_ab(q))
                + g_beta.rmul(self.X.ab(alpha))
                + g_alpha.lmul(self.Y.ab(beta))
                + self.Y.compositor(beta, alpha).rmul(self.fsum_ab(n)))

    def box_pasted(self, beta: Nil2Hom, alpha: Nil2Hom, t_beta: SplitTrack, t_alpha: SplitTrack) -> SplitTrack:
        """The same pasting assembled from whiskerings and vertical composites."""
        q, n = beta.target_rank, alpha.source_rank
        fq, fn = fold_sum(self.f, q), fold_sum(self.f, n)
        sch = PastingScheme({"gb": t_beta, "ga": t_alpha,
                             "phiX": self.X.compositor_track(beta, alpha),
                             "phiY": self.Y.compositor_track(beta, alpha)})
        s0 = sch.add("inv", "phiX")
        s1 = sch.add("lwhisk", fq, s0)
        s2 = sch.add("rwhisk", "gb", self.X(alpha))
        s3 = sch.add("lwhisk", self.Y(beta), "ga")
        s4 = sch.add("rwhisk", "phiY", fn)
        s5 = sch.add("vcomp", s1, s2)
        s6 = sch.add("vcomp", s5, s3)
        sch.add("vcomp", s6, s4)
        return paste(self.model, sch)

    def track(self, alpha: Nil2Hom) -> SplitTrack:
        m, n = alpha.target_rank, alpha.source_rank
        u = self.model.comp(fold_sum(self.f, m), self.X(alpha))
        v = self.model.comp(self.Y(alpha), fold_sum(self.f, n))
        return self.model.track(u, v, self.gamma(alpha))

    def boxbox(self, beta: Nil2Hom, alpha: Nil2Hom) -> MMatrix:
        return self.box(beta, alpha, self.gamma(beta), self.gamma(alpha))

    # the construction
    def gamma(self, alpha: Nil2Hom) -> MMatrix:
        if alpha in self.overrides:
            return self.overrides[alpha]
        if self.parent is not None:
            return self.parent.gamma(alpha)
        return _memo(self._cache, self._lock, ("gamma", alpha), lambda: self._gamma(alpha))

    def _gamma(self, alpha: Nil2Hom) -> MMatrix:
        n, m = alpha.source_rank, alpha.target_rank
        if n == 0 or m == 0 or is_inclusion(alpha) or is_projection(alpha):
            return self.zeros(m, n)
        k = power_of(alpha)
        if k is not None and not alpha.images[0].comm:
            return self.mu(k)
        if alpha == product_hom(m):
            return self.additivity(m)
        return self.general(alpha)

    def general(self, alpha: Nil2Hom, mu: Callable[[int], MMatrix] | None = None) -> MMatrix:
        """The unique track whose corestriction at ``(g, e)`` is ``mu_{A[g,e]}``."""
        mu = mu or self.mu
        n, m = alpha.source_rank, alpha.target_rank
        A = abelianize(alpha)
        target = MMatrix.vstack(self.M, [MMatrix.hstack(self.M, [mu(int(A[g, e])) for e in range(n)], self.b)
                                          for g in range(m)], n * self.a)
        return self.solver.solve(("corestrict", self.a, self.b, n, m),
                                 lambda X: self._corestrictions(alpha, X), (m * self.b, n * self.a), target)

    def _corestrictions(self, alpha: Nil2Hom, X: MMatrix) -> MMatrix:
        n, m = alpha.source_rank, alpha.target_rank
        rows = []
        for g in range(1, m + 1):
            r = _retraction(m, g)
            row = []
            for e in range(1, n + 1):
                i = _inclusion(n, e)
                inner = self.box(alpha, i, X, self.gamma(i))
                row.append(self.box(r, hom_compose(alpha, i), self.gamma(r), inner))
            rows.append(MMatrix.hstack(self.M, row, self.b))
        return MMatrix.vstack(self.M, rows, n * self.a)

    def additivity(self, n: int) -> MMatrix:
        """``Gamma_n``: the track ``(f)_n F(alpha_n) => F(alpha_n) f`` that restricts
        to the trivial track along every ``r_e``."""
        if n <= 1:
            return self.zeros(n, 1)
        return _memo(self._cache, self._lock, ("add", n), lambda: self._additivity(n))

    def _additivity(self, n: int) -> MMatrix:
        al = product_hom(n)

        def P(X):
            return MMatrix.vstack(self.M, [self.box(_retraction(n, e), al, self.gamma(_retraction(n, e)), X)
                                           for e in range(1, n + 1)], self.a)

        return self.solver.solve(("additivity", self.a, self.b, n), P, (n * self.b, self.a),
                                 MMatrix.vstack(self.M, [self.gamma(_identity(1))] * n, self.a))

    def minus_one(self) -> MMatrix:
        """``Gamma_{-1}``: the unique ``X`` such that the copairing track
        ``K = (0, X)`` over ``(1, xi_{-1})`` pastes with ``Gamma_2`` to the track
        of the zero map."""
        return _memo(self._cache, self._lock, ("neg",), self._minus_one)

    def _minus_one(self) -> MMatrix:
        c = copairing([identity_hom(1), power_hom(-1)])
        a2 = product_hom(2)
        zero = hom_compose(c, a2)

        def K(X):
            return self.general(c, mu=lambda k: X if k == -1 else self.mu(k))

        def P(X):
            return self.box(c, a2, K(X), self.additivity(2))

        return self.solver.solve(("minus_one", self.a, self.b), P, (self.b, self.a), self.gamma(zero))

    def mu(self, k: int) -> MMatrix:
        """``mu_k = Gamma_{xi_k}``, the track ``f xi_k => xi_k f``."""
        return _memo(self._cache, self._lock, ("mu", k), lambda: self._mu(k))

    def _mu(self, k: int) -> MMatrix:
        if k in (0, 1):
            return self.zeros(1, 1)
        if k == -1:
            return self.minus_one()
        if k < 0:
            return self.box(power_hom(-1), power_hom(-k), self.mu(-1), self.mu(-k))
        return self.box(fold_hom(1, k), product_hom(k), self.gamma(fold_hom(1, k)), self.additivity(k))

    def as_transformation(self) -> PseudoNatTrans:
        """The interchange structure as a coproduct-preserving transformation
        ``F_X => F_Y`` with evaluation ``f``."""
        return PseudoNatTrans(self.X, self.Y, lambda n: fold_sum(self.f, n), self.gamma,
                              name=f"T({self.f})")

    def certify(self, pairs: Iterable[tuple[Nil2Hom, Nil2Hom]], seed: int | None = None) -> Report:
        rep = verify_property_gamma(self, pairs, seed=seed)
        self.is_gamma_structure = rep.ok
        return rep


def additivity_track(I: InterchangeStructure, n: int) -> SplitTrack:
    return I.track(product_hom(n)) if n != 1 else I.track(identity_hom(1))


def multiplication_track(I: InterchangeStructure, k: int) -> SplitTrack:
    return I.track(power_hom(k))


def general_gamma(I: InterchangeStructure, alpha: Nil2Hom) -> SplitTrack:
    return I.track(alpha)


def canonical_gamma(f: Nil2Hom, source: Pseudofunctor, target: Pseudofunctor | None = None,
                    certify_on: Iterable | None = None) -> InterchangeStructure:
    target = target if target is not None else source
    I = InterchangeStructure(f, source, target)
    if certify_on is not None:
        rep = I.certify(certify_on)
        if not rep.ok:
            raise StructureError(f"canonical structure fails property Gamma: {rep.first_violation()}")
    return I


def closed_form_gamma(I: InterchangeStructure, alpha: Nil2Hom, dX: Callable, dY: Callable) -> MMatrix:
    """``d^Y_alpha (I (x) A_f) - (I (x) A_f) d^X_alpha`` for structures obtained
    from the strict one by entry families ``d``."""
    m, n = alpha.target_rank, alpha.source_rank
    return dY(alpha).rmul(I.fsum_ab(n)) - dX(alpha).lmul(I.fsum_ab(m))


# -- property Gamma and the grid ---------------------------------------------------------

def verify_property_gamma(I: InterchangeStructure, pairs: Iterable[tuple[Nil2Hom, Nil2Hom]],
                          seed: int | None = None, stop_at_first: bool = False) -> Report:
    rep = Report(f"property Gamma for {I.name}", seed=seed)
    for be, al in pairs:
        lhs = I.boxbox(be, al)
        rhs = I.gamma(hom_compose(be, al))
        ok = lhs == rhs
        rep.check("Gamma_beta [x] Gamma_alpha = Gamma_{beta alpha}", ok,
                  {"beta": str(be), "alpha": str(al), "lhs": lhs.to_json(), "rhs": rhs.to_json()})
        if stop_at_first and not ok:
            break
    return rep


def verify_trivial_tracks(I: InterchangeStructure, max_rank: int = 3) -> Report:
    rep = Report(f"trivial interchange tracks for {I.name}")
    for n in range(1, max_rank + 1):
        rep.check("Gamma on identities is trivial", I.gamma(identity_hom(n)).is_zero(), n)
        for e in range(1, n + 1):
            rep.check("Gamma on inclusions is trivial", I.gamma(inclusion_hom(n, e)).is_zero(), [n, e])
            rep.check("Gamma on projections is trivial", I.gamma(retraction_hom(n, e)).is_zero(), [n, e])
    rep.check("mu_0 and mu_1 are trivial", I.mu(0).is_zero() and I.mu(1).is_zero())
    return rep


def grid_alphas(max_rank: int = 3, length: int = 4) -> list[Nil2Hom]:
    """Every hom ``Z -> F_m`` (``m <= max_rank``) whose image has word length
    ``<= length``."""
    return [Nil2Hom(1, m, (e,)) for m in range(1, max_rank + 1) for e in elements_up_to(m, length)]


def grid_pairs(max_rank: int = 3, length: int = 4, seed: int = 0, random_betas: int = 2,
               multi: int = 60) -> list[tuple[Nil2Hom, Nil2Hom]]:
    """Composable pairs ``(beta, alpha)`` for the property-Gamma grid.

    Every single-generator ``alpha`` of the grid is paired with the retractions
    and folds of its target, with ``xi_k`` or the product maps, and with seeded
    random ``beta``.  Seeded multi-generator pairs are added.
    """
    rng = random.Random(seed)
    out = []
    for al in grid_alphas(max_rank, length):
        m = al.target_rank
        betas = [retraction_hom(m, e) for e in range(1, m + 1)] if m > 1 else []
        if m > 1:
            betas.append(fold_hom(1, m))
        else:
            betas.extend([power_hom(-1), power_hom(2), product_hom(2)])
        betas.extend(random_hom(rng, m, rng.randint(1, max_rank), 1) for _ in range(random_betas))
        out.extend((be, al) for be in betas)
    for _ in range(multi):
        n, m, q = (rng.randint(1, max_rank) for _ in range(3))
        out.append((random_hom(rng, m, q, 1), random_hom(rng, n, m, 1)))
    return out


def find_gamma_violation(I: InterchangeStructure, alpha0: Nil2Hom, max_rank: int = 3):
    """A composable pair involving ``alpha0`` at which property Gamma fails, or ``None``."""
    n, m = alpha0.source_rank, alpha0.target_rank
    befores = [retraction_hom(m, g) for g in range(1, m + 1)] + [fold_hom(1, m)] if m else []
    if m == 1:
        befores += [power_hom(k) for k in (-1, 2, 3, 0)] + [product_hom(2)]
    afters = [inclusion_hom(n, e) for e in range(1, n + 1)] + [product_hom(n)] if n else []
    if n == 1:
        afters += [power_hom(k) for k in (-1, 2, 3, 0)] + [fold_hom(1, 2)]
    pairs = [(be, alpha0) for be in befores] + [(alpha0, al) for al in afters]
    for be, al in pairs:
        if I.boxbox(be, al) != I.gamma(hom_compose(be, al)):
            return be, al
    return None


def nonzero_perturbations(M: AbGroup) -> list[tuple[int, ...]]:
    """Every nonzero element of a finite ``M``; ``+-1`` on free summands."""
    out = []
    ranges = [range(d) if d else (-1, 0, 1) for d in M.moduli]
    for v in itertools.product(*ranges):
        if any(v):
            out.append(tuple(v))
    return out


def verify_uniqueness(I: InterchangeStructure, alphas: Iterable[Nil2Hom]) -> Report:
    """Perturb each ``Gamma_alpha`` entrywise by every nonzero coefficient and
    look for a property-Gamma violation."""
    rep = Report(f"uniqueness of {I.name}")
    for al in alphas:
        base = I.gamma(al)
        rows, cols = base.shape
        for i in range(rows):
            for j in range(cols):
                for v in nonzero_perturbations(I.M):
                    J = I.with_overrides({al: base + MMatrix.unit(I.M, rows, cols, i, j, v)})
                    w = find_gamma_violation(J, al)
                    rep.check("perturbed structure violates property Gamma", w is not None,
                              {"alpha": str(al), "entry": [i, j], "value": list(v)})
    return rep


# -- naturality -----------------------------------------------------------------------

def paste_composite(If: InterchangeStructure, Ig: InterchangeStructure, alpha: Nil2Hom) -> SplitTrack:
    """``((g)_m Gamma^f_alpha)`` followed by ``(Gamma^g_alpha (f)_n)``."""
    model = If.model
    m, n = alpha.target_rank, alpha.source_rank
    t1 = model.lwhisk(fold_sum(Ig.f, m), If.track(alpha))
    t2 = model.rwhisk(Ig.track(alpha), fold_sum(If.f, n))
    return model.vcomp(t2, t1)


def paste_track(If: InterchangeStructure, psi: SplitTrack, alpha: Nil2Hom) -> SplitTrack:
    """``(psi^-1)_m F_X(alpha)``, then ``Gamma^f_alpha``, then ``F_Y(alpha) (psi)_n``
    for a track ``psi: f => g``."""
    model = If.model
    m, n = alpha.target_rank, alpha.source_rank
    inv = model.inv(psi)
    t1 = model.rwhisk(model.sum_track([inv] * m) if m else model.idtrack(Nil2Hom(0, 0, ())), If.X(alpha))
    t3 = model.lwhisk(If.Y(alpha), model.sum_track([psi] * n) if n else model.idtrack(Nil2Hom(0, 0, ())))
    return model.vcomp(t3, model.vcomp(If.track(alpha), t1))


def verify_naturality(If: InterchangeStructure, Ig: InterchangeStructure | None = None,
                      Igf: InterchangeStructure | None = None, psi: SplitTrack | None = None,
                      Ipsi: InterchangeStructure | None = None, alphas: Iterable[Nil2Hom] = (),
                      seed: int | None = None) -> Report:
    """Compare the composite pasting with ``Gamma^{gf}`` and the track pasting
    along ``psi: f => g`` with ``Gamma^g``."""
    rep = Report("naturality of interchange tracks", seed=seed)
    for al in alphas:
        if Ig is not None:
            gf = Igf if Igf is not None else InterchangeStructure(hom_compose(Ig.f, If.f), If.X, Ig.Y)
            t = paste_composite(If, Ig, al)
            want = gf.track(al)
            rep.check("composite pasting equals Gamma^{gf}", t.src == want.src and t.tgt == want.tgt
                      and t.coords == want.coords, {"alpha": str(al), "pasted": t.coords.to_json(),
                                                     "expected": want.coords.to_json()})
        if psi is not None:
            Ip = Ipsi if Ipsi is not None else InterchangeStructure(psi.tgt, If.X, If.Y)
            t = paste_track(If, psi, al)
            want = Ip.track(al)
            rep.check("track pasting equals Gamma^g", t.src == want.src and t.tgt == want.tgt
                      and t.coords == want.coords, {"alpha": str(al), "pasted": t.coords.to_json(),
                                                     "expected": want.coords.to_json()})
    return rep


def self_track_generators(model: SplitModel, f: Nil2Hom) -> list[SplitTrack]:
    """Unit-coordinate self-tracks of ``f``, one per entry and cyclic summand."""
    M = model.M
    rows, cols = f.target_rank, f.source_rank
    out = []
    for i in range(rows):
        for j in range(cols):
            for c in range(M.ngens):
                v = [0] * M.ngens
                v[c] = 1
                out.append(model.track(f, f, MMatrix.unit(M, rows, cols, i, j, v)))
    return out


# -- the equivalence -------------------------------------------------------------------

class GammaFunctorPair:
    """``T``: object ``X`` to its weak cogroup, map ``f`` to its canonical
    interchange structure, track ``s`` to the coproduct-preserving homotopy
    ``s v ... v s``.  ``G``: evaluation at ``Z``."""

    def __init__(self, model: SplitModel, theory: str = "nil2"):
        if theory not in ("nil1", "nil2"):
            raise StructureError(f"unknown theory {theory!r}")
        if theory == "nil1" and any(d % 2 == 0 for d in model.M.moduli if d):
            raise StructureError("the abelian variant needs coefficients without 2-torsion")
        self.model = model
        self.theory = theory
        self._objects: dict = {}
        self._lock = threading.Lock()

    def T_object(self, rank: int) -> Pseudofunctor:
        return _memo(self._objects, self._lock, rank, lambda: strict_cogroup(self.model, rank))

    def T_map(self, f: Nil2Hom, source: Pseudofunctor | None = None,
              target: Pseudofunctor | None = None) -> PseudoNatTrans:
        X = source or self.T_object(f.source_rank)
        Y = target or self.T_object(f.target_rank)
        return InterchangeStructure(f, X, Y).as_transformation()

    def T_track(self, s: SplitTrack) -> PseudoHomotopy:
        M = self.model.M
        return PseudoHomotopy(self.T_map(s.src), self.T_map(s.tgt),
                              lambda n: MMatrix.block_diag(M, [s.coords] * n)
                              if n else MMatrix.zeros(M, 0, 0))

    @staticmethod
    def G_object(F: Pseudofunctor) -> int:
        return F.rank

    @staticmethod
    def G_map(T: PseudoNatTrans) -> Nil2Hom:
        return T.evaluation

    def G_track(self, H: PseudoHomotopy) -> SplitTrack:
        return H.track(1)

    def unit(self, F: Pseudofunctor) -> tuple[PseudoNatTrans, PseudoNatTrans]:
        """The unit ``F => F_{G F}`` and its inverse: interchange structures of
        the identity map between ``F`` and the strict structure."""
        FX = self.T_object(F.rank)
        one = identity_hom(F.rank)
        return (InterchangeStructure(one, F, FX).as_transformation(),
                InterchangeStructure(one, FX, F).as_transformation())

    def verify(self, seed: int = 0, samples: int = 50, perturbed: int = 10) -> Report:
        rng = random.Random(seed)
        model = self.model
        rep = Report(f"equivalence for {model}", seed=seed)
        alphas = structural_homs(2) + sample_homs(rng, (1, 2), 8)
        pairs = [(random_hom(rng, al.target_rank, rng.randint(1, 2), 1), al) for al in alphas]
        for _ in range(samples):
            a, b = rng.randint(1, 2), rng.randint(1, 2)
            f = model.random_rebase(rng, model.lift(_rand_intmat(rng, b, a)))
            rep.check("G T X = X", self.G_object(self.T_object(a)) == a, a)
            T = self.T_map(f)
            rep.check("G T f = f", self.G_map(T) == f, str(f))
            s = model.random_track(rng, f)
            g = model.random_rebase(rng, f)
            s = model.track(f, g, s.coords)
            H = self.T_track(s)
            rep.check("G T s = s", model.track_eq(self.G_track(H), s), str(f))
        for _ in range(3):
            f = model.random_rebase(rng, model.lift(_rand_intmat(rng, 1, 1)))
            rep.merge(verify_transformation(self.T_map(f), pairs), "T f: ")
            rep.merge(verify_homotopy(self.T_track(model.random_track(rng, f)), alphas), "T s: ")
        for k in range(perturbed):
            a = rng.randint(1, 2)
            F = perturbed_cogroup(model, a, seed=rng.getrandbits(32))
            u, v = self.unit(F)
            rep.merge(verify_transformation(u, pairs[:20]), "unit: ")
            rep.merge(verify_transformation(v, pairs[:20]), "unit inverse: ")
            rep.check("unit is invertible", transformations_equal(u.then(v), identity_transformation(F), alphas)
                      and transformations_equal(v.then(u), identity_transformation(self.T_object(a)), alphas),
                      {"rank": a, "structure": F.name})
        F = self.T_object(1)
        u, _ = self.unit(F)
        rep.check("unit of F_X is the identity transformation",
                  transformations_equal(u, identity_transformation(F), alphas))
        return rep


def _rand_intmat(rng, rows, cols, bound=3):
    from .trackcat import IntMat
    return IntMat(rows, cols, tuple(tuple(rng.randint(-bound, bound) for _ in range(cols)) for _ in range(rows)))


def equivalence_pair(model: SplitModel, theory: str = "nil2") -> GammaFunctorPair:
    return GammaFunctorPair(model, theory)


def homotopy_determination(model: SplitModel, f: Nil2Hom | None = None) -> Report:
    """Over a finite ``M``: for every ``H_1``, list all ``H_2`` satisfying the
    homotopy condition at the inclusions and projections of ``Z v Z``; exactly
    one exists and it is ``H_1 v H_1``."""
    M = model.M
    if not M.is_finite:
        raise StructureError("homotopy determination enumerates tracks and needs a finite M")
    f = f if f is not None else identity_hom(1)
    a, b = f.source_rank, f.target_rank
    E = GammaFunctorPair(model)
    T = E.T_map(f)
    F, G = T.source, T.target
    alphas = [inclusion_hom(2, 1), inclusion_hom(2, 2), retraction_hom(2, 1), retraction_hom(2, 2)]
    rep = Report(f"homotopies determined at Z over {M}")
    elems = list(M.elements())
    for h1 in itertools.product(elems, repeat=a * b):
        H1 = MMatrix.from_entries(M, [list(h1[r * a:(r + 1) * a]) for r in range(b)])
        sols = []
        for h2 in itertools.product(elems, repeat=4 * a * b):
            H2 = MMatrix.from_entries(M, [list(h2[r * 2 * a:(r + 1) * 2 * a]) for r in range(2 * b)])
            Hn = {1: H1, 2: H2}
            if all(T.coords(al) == -Hn[al.target_rank].rmul(F.ab(al)) + T.coords(al)
                   + Hn[al.source_rank].lmul(G.ab(al)) for al in alphas):
                sols.append(H2)
        rep.check("exactly one homotopy extends H_1", len(sols) == 1, {"H1": H1.to_json(), "count": len(sols)})
        rep.check("it is H_1 v H_1", bool(sols) and sols[0] == MMatrix.block_diag(M, [H1, H1]), H1.to_json())
    return rep
