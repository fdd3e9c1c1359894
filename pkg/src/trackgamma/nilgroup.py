"""Free groups and free class-2 nilpotent groups.

Commutators follow ``[a, b] = a^-1 b^-1 a b``, so ``b a = a b [b, a]``.  A
class-2 element of rank ``n`` is stored in collected form

    x1^a1 ... xn^an  *  prod_{i<j} [xi, xj]^c_ij

with the pairs ``(i, j)`` in lexicographic order.  Generators are 1-based in
text and 0-based in code.

The group law in these coordinates (derived by collecting ``x^a x^b``):

    gen(uv)   = a + b
    c_ij(uv)  = c_ij(u) + c_ij(v) - a_j * b_i          (i < j)

The correction comes from moving each ``xi^bi`` left past ``xj^aj`` with
``j > i``, which produces ``[xj^aj, xi^bi] = [xi, xj]^(-aj bi)``.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

IntMatrix = np.ndarray  # dtype=object, exact integers


class MalformedInput(ValueError):
    pass


class RankMismatch(ValueError):
    pass


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


@lru_cache(maxsize=None)
def pair_index(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(pairs(n))}


# -- free groups -----------------------------------------------------------

@dataclass(frozen=True)
class FreeWord:
    rank: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise MalformedInput("negative rank")
        object.__setattr__(self, "letters", tuple((int(g), int(e)) for g, e in self.letters))
        for pos, (g, e) in enumerate(self.letters):
            if not 1 <= g <= self.rank:
                raise MalformedInput(f"letter {pos}: generator x{g} outside rank {self.rank}")
            if e == 0:
                raise MalformedInput(f"letter {pos}: zero exponent")

    @classmethod
    def from_letters(cls, rank: int, letters: Iterable[tuple[int, int]]) -> "FreeWord":
        return cls(rank, tuple(letters))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if self.rank != other.rank:
            raise RankMismatch(f"ranks {self.rank} and {other.rank}")
        return FreeWord(self.rank, self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(self.rank, tuple((g, -e) for g, e in reversed(self.letters)))

    def length(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def is_reduced(self) -> bool:
        return all(a[0] != b[0] for a, b in zip(self.letters, self.letters[1:]))

    def __str__(self) -> str:
        return format_letters(self.letters)


def fg_reduce(w: FreeWord) -> FreeWord:
    """Freely reduce: merge adjacent powers of the same generator and drop zeros."""
    stack: list[list[int]] = []
    for g, e in w.letters:
        if not 1 <= g <= w.rank:
            raise MalformedInput(f"generator x{g} outside rank {w.rank}")
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if stack[-1][1] == 0:
                stack.pop()
        elif e:
            stack.append([g, e])
    return FreeWord(w.rank, tuple((g, e) for g, e in stack))


def commutator_word(rank: int, i: int, j: int) -> FreeWord:
    """The word ``[xi, xj] = xi^-1 xj^-1 xi xj`` (1-based indices)."""
    return FreeWord(rank, ((i, -1), (j, -1), (i, 1), (j, 1)))


# -- class-2 elements ------------------------------------------------------

@dataclass(frozen=True)
class Nil2Element:
    rank: int
    gen: tuple[int, ...]
    comm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "gen", tuple(int(x) for x in self.gen))
        object.__setattr__(self, "comm", tuple(int(x) for x in self.comm))
        if len(self.gen) != self.rank:
            raise MalformedInput(f"gen_exp has length {len(self.gen)}, expected {self.rank}")
        need = self.rank * (self.rank - 1) // 2
        if len(self.comm) != need:
            raise MalformedInput(f"comm_exp has length {len(self.comm)}, expected {need}")
        object.__setattr__(self, "_hash", hash((self.rank, self.gen, self.comm)))

    def __hash__(self):
        return self._hash

    @classmethod
    def identity(cls, rank: int) -> "Nil2Element":
        return cls(rank, (0,) * rank, (0,) * (rank * (rank - 1) // 2))

    @classmethod
    def generator(cls, rank: int, i: int) -> "Nil2Element":
        """``x_{i+1}`` (0-based index)."""
        g = [0] * rank
        g[i] = 1
        return cls(rank, tuple(g), (0,) * (rank * (rank - 1) // 2))

    @classmethod
    def basic_commutator(cls, rank: int, i: int, j: int) -> "Nil2Element":
        """``[x_{i+1}, x_{j+1}]`` for ``i < j`` (0-based)."""
        c = [0] * (rank * (rank - 1) // 2)
        c[pair_index(rank)[(i, j)]] = 1
        return cls(rank, (0,) * rank, tuple(c))

    @property
    def gen_exp(self) -> tuple[int, ...]:
        return self.gen

    @property
    def comm_exp(self) -> tuple[int, ...]:
        return self.comm

    def is_identity(self) -> bool:
        return not any(self.gen) and not any(self.comm)

    def is_central(self) -> bool:
        return not any(self.gen)

    def __mul__(self, other: "Nil2Element") -> "Nil2Element":
        return nil2_mul(self, other)

    def __pow__(self, k: int) -> "Nil2Element":
        return nil2_pow(self, k)

    def inverse(self) -> "Nil2Element":
        return nil2_inv(self)

    def __str__(self) -> str:
        return format_element(self)

    @classmethod
    def parse(cls, text: str, rank: int) -> "Nil2Element":
        return parse_element(text, rank)


def _check_rank(a: Nil2Element, b: Nil2Element):
    if a.rank != b.rank:
        raise RankMismatch(f"ranks {a.rank} and {b.rank}")


def nil2_mul(a: Nil2Element, b: Nil2Element) -> Nil2Element:
    _check_rank(a, b)
    ag, bg = a.gen, b.gen
    comm = [c + d - ag[j] * bg[i]
            for (i, j), c, d in zip(pairs(a.rank), a.comm, b.comm)]
    return Nil2Element(a.rank, tuple(x + y for x, y in zip(ag, bg)), tuple(comm))


def nil2_inv(a: Nil2Element) -> Nil2Element:
    g = a.gen
    comm = [-c - g[i] * g[j] for (i, j), c in zip(pairs(a.rank), a.comm)]
    return Nil2Element(a.rank, tuple(-x for x in g), tuple(comm))


def nil2_pow(a: Nil2Element, k: int) -> Nil2Element:
    """``a^k`` for any integer ``k``; closed form of the collected power."""
    g = a.gen
    t = k * (k - 1) // 2
    comm = [k * c - t * g[i] * g[j] for (i, j), c in zip(pairs(a.rank), a.comm)]
    return Nil2Element(a.rank, tuple(k * x for x in g), tuple(comm))


def nil2_commutator(u: Nil2Element, v: Nil2Element) -> Nil2Element:
    """``[u, v]``; central, bilinear in the abelianizations."""
    _check_rank(u, v)
    a, b = u.gen, v.gen
    comm = [a[i] * b[j] - a[j] * b[i] for i, j in pairs(u.rank)]
    return Nil2Element(u.rank, (0,) * u.rank, tuple(comm))


def nil2_product(rank: int, factors: Iterable[Nil2Element]) -> Nil2Element:
    out = Nil2Element.identity(rank)
    for f in factors:
        out = nil2_mul(out, f)
    return out


def nil2_normalize(w: FreeWord) -> Nil2Element:
    """Collected form of the image of a free word in the class-2 quotient."""
    n = w.rank
    zero_comm = (0,) * (n * (n - 1) // 2)
    out = Nil2Element.identity(n)
    for g, e in w.letters:
        if not 1 <= g <= n:
            raise MalformedInput(f"generator x{g} outside rank {n}")
        gen = [0] * n
        gen[g - 1] = e
        out = nil2_mul(out, Nil2Element(n, tuple(gen), zero_comm))
    return out


def element_word(a: Nil2Element) -> FreeWord:
    """A free word representing ``a`` (the collected form spelled out)."""
    letters: list[tuple[int, int]] = []
    for i, e in enumerate(a.gen):
        if e:
            letters.append((i + 1, e))
    for (i, j), c in zip(pairs(a.rank), a.comm):
        if c:
            w = commutator_word(a.rank, i + 1, j + 1)
            if c < 0:
                w = w.inverse()
            letters.extend(w.letters * abs(c))
    return FreeWord(a.rank, tuple(letters))


# -- text form -------------------------------------------------------------

_TOKEN = re.compile(r"\[\s*x(\d+)\s*,\s*x(\d+)\s*\](?:\^(-?\d+))?|x(\d+)(?:\^(-?\d+))?|1")


def format_letters(letters: Sequence[tuple[int, int]]) -> str:
    if not letters:
        return "1"
    return " ".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in letters)


def format_element(a: Nil2Element) -> str:
    parts = [f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(a.gen) if e]
    for (i, j), c in zip(pairs(a.rank), a.comm):
        if c:
            parts.append(f"[x{i + 1},x{j + 1}]" + ("" if c == 1 else f"^{c}"))
    return " ".join(parts) if parts else "1"


def parse_word(text: str, rank: int) -> FreeWord:
    """Parse whitespace-separated letters ``xi^k`` and commutators ``[xi,xj]^k``.

    Commutators are expanded into their defining free words.
    """
    letters: list[tuple[int, int]] = []
    pos = 0
    s = text.strip()
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(s, pos)
        if not m:
            raise MalformedInput(f"cannot parse element text at column {pos}: {s[pos:pos + 12]!r}")
        if m.group(1):
            i, j = int(m.group(1)), int(m.group(2))
            k = int(m.group(3)) if m.group(3) else 1
            for idx in (i, j):
                if not 1 <= idx <= rank:
                    raise MalformedInput(f"generator x{idx} outside rank {rank} at column {pos}")
            w = commutator_word(rank, i, j)
            if k < 0:
                w = w.inverse()
            letters.extend(w.letters * abs(k))
        elif m.group(4):
            g = int(m.group(4))
            k = int(m.group(5)) if m.group(5) else 1
            if not 1 <= g <= rank:
                raise MalformedInput(f"generator x{g} outside rank {rank} at column {pos}")
            if k:
                letters.append((g, k))
        pos = m.end()
    return FreeWord(rank, tuple(letters))


def parse_element(text: str, rank: int) -> Nil2Element:
    return nil2_normalize(parse_word(text, rank))


# -- homomorphisms ---------------------------------------------------------

@dataclass(frozen=True)
class Nil2Hom:
    """Homomorphism ``F_source -> F_target`` given by generator images."""

    source_rank: int
    target_rank: int
    images: tuple[Nil2Element, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source_rank:
            raise MalformedInput(f"{len(self.images)} images for source rank {self.source_rank}")
        for k, im in enumerate(self.images):
            if im.rank != self.target_rank:
                raise RankMismatch(f"image {k + 1} has rank {im.rank}, expected {self.target_rank}")
        object.__setattr__(self, "_hash", hash((self.source_rank, self.target_rank, self.images)))

    def __hash__(self):
        return self._hash

    def __call__(self, a: Nil2Element) -> Nil2Element:
        return hom_apply(self, a)

    def __matmul__(self, other: "Nil2Hom") -> "Nil2Hom":
        return hom_compose(self, other)

    def is_identity(self) -> bool:
        return self == identity_hom(self.source_rank)

    def to_strings(self) -> list[str]:
        return [format_element(e) for e in self.images]

    @classmethod
    def from_strings(cls, texts: Sequence[str], target_rank: int) -> "Nil2Hom":
        return cls(len(texts), target_rank, tuple(parse_element(t, target_rank) for t in texts))

    def __str__(self) -> str:
        body = ", ".join(f"x{i + 1} -> {format_element(e)}" for i, e in enumerate(self.images))
        return f"F{self.source_rank} -> F{self.target_rank} ({body})"


def hom_apply(f: Nil2Hom, a: Nil2Element) -> Nil2Element:
    if a.rank != f.source_rank:
        raise RankMismatch(f"element of rank {a.rank} fed to hom with source rank {f.source_rank}")
    out = Nil2Element.identity(f.target_rank)
    for im, e in zip(f.images, a.gen):
        if e:
            out = nil2_mul(out, nil2_pow(im, e))
    for (i, j), c in zip(pairs(a.rank), a.comm):
        if c:
            out = nil2_mul(out, nil2_pow(nil2_commutator(f.images[i], f.images[j]), c))
    return out


def hom_compose(f: Nil2Hom, g: Nil2Hom) -> Nil2Hom:
    """``f o g`` (``g`` applied first)."""
    if f.source_rank != g.target_rank:
        raise RankMismatch(f"cannot compose F{f.source_rank}->F{f.target_rank} "
                           f"after F{g.source_rank}->F{g.target_rank}")
    return Nil2Hom(g.source_rank, f.target_rank, tuple(hom_apply(f, im) for im in g.images))


def abelianize(f: Nil2Hom) -> IntMatrix:
    """``m x n`` integer matrix whose column ``j`` is the exponent vector of image ``j``."""
    out = np.zeros((f.target_rank, f.source_rank), dtype=object)
    for j, im in enumerate(f.images):
        for i, e in enumerate(im.gen):
            out[i, j] = e
    return out


# -- structural maps -------------------------------------------------------

def identity_hom(n: int) -> Nil2Hom:
    return Nil2Hom(n, n, tuple(Nil2Element.generator(n, i) for i in range(n)))


def zero_hom(n: int, m: int) -> Nil2Hom:
    return Nil2Hom(n, m, tuple(Nil2Element.identity(m) for _ in range(n)))


def power_hom(k: int) -> Nil2Hom:
    """``x -> x^k`` on the rank-one group."""
    return Nil2Hom(1, 1, (Nil2Element(1, (k,), ()),))


def product_hom(n: int) -> Nil2Hom:
    """``Z -> F_n``, ``x -> x1 x2 ... xn`` (increasing order)."""
    g = Nil2Element(n, (1,) * n, (0,) * (n * (n - 1) // 2))
    return Nil2Hom(1, n, (g,))


def fold_hom(n: int, m: int = 1) -> Nil2Hom:
    """Fold ``F_{nm} -> F_n`` sending ``x_{(b-1)n+i}`` to ``x_i``.

    ``fold_hom(1, n)`` sends every generator of ``F_n`` to ``x``.
    """
    return Nil2Hom(n * m, n, tuple(Nil2Element.generator(n, k % n) for k in range(n * m)))


def injection_hom(src: int, tgt: int, index_map: Sequence[int]) -> Nil2Hom:
    """Inclusion ``F_src -> F_tgt`` along an injection of 1-based generator indices."""
    if len(index_map) != src or len(set(index_map)) != src:
        raise MalformedInput("index map must be an injection of the source generators")
    for t in index_map:
        if not 1 <= t <= tgt:
            raise MalformedInput(f"index {t} outside target rank {tgt}")
    return Nil2Hom(src, tgt, tuple(Nil2Element.generator(tgt, t - 1) for t in index_map))


def projection_hom(src: int, tgt: int, index_map: Sequence[int]) -> Nil2Hom:
    """Projection ``F_src -> F_tgt`` onto the generators picked by an injection
    ``1..tgt -> 1..src``; the other generators go to the identity."""
    if len(index_map) != tgt or len(set(index_map)) != tgt:
        raise MalformedInput("index map must be an injection of the target generators")
    for t in index_map:
        if not 1 <= t <= src:
            raise MalformedInput(f"index {t} outside source rank {src}")
    back = {t: k for k, t in enumerate(index_map)}
    images = []
    for s in range(1, src + 1):
        images.append(Nil2Element.generator(tgt, back[s]) if s in back
                      else Nil2Element.identity(tgt))
    return Nil2Hom(src, tgt, tuple(images))


def retraction_hom(n: int, e: int) -> Nil2Hom:
    """``r_e: F_n -> Z`` keeping generator ``e`` (1-based)."""
    if not 1 <= e <= n:
        raise MalformedInput(f"summand {e} outside rank {n}")
    return projection_hom(n, 1, [e])


def inclusion_hom(n: int, e: int) -> Nil2Hom:
    """``i_e: Z -> F_n``, ``x -> x_e`` (1-based)."""
    if not 1 <= e <= n:
        raise MalformedInput(f"summand {e} outside rank {n}")
    return injection_hom(1, n, [e])


def _shift(a: Nil2Element, rank: int, offset: int) -> Nil2Element:
    """Embed an element into a larger free group, generators shifted by ``offset``."""
    gen = [0] * rank
    for i, e in enumerate(a.gen):
        gen[offset + i] = e
    comm = [0] * (rank * (rank - 1) // 2)
    idx = pair_index(rank)
    for (i, j), c in zip(pairs(a.rank), a.comm):
        if c:
            comm[idx[(offset + i, offset + j)]] = c
    return Nil2Element(rank, tuple(gen), tuple(comm))


def block_sum(homs: Sequence[Nil2Hom]) -> Nil2Hom:
    """``h_1 v ... v h_k``: each block acts on its own generators."""
    m = sum(h.target_rank for h in homs)
    images = []
    off = 0
    for h in homs:
        images.extend(_shift(im, m, off) for im in h.images)
        off += h.target_rank
    return Nil2Hom(sum(h.source_rank for h in homs), m, tuple(images))


def copairing(homs: Sequence[Nil2Hom]) -> Nil2Hom:
    """``(h_1, ..., h_k): F_{n_1 + ... + n_k} -> F_m`` for homs with a common target."""
    if not homs:
        raise MalformedInput("copairing of no maps needs an explicit target")
    m = homs[0].target_rank
    for h in homs:
        if h.target_rank != m:
            raise RankMismatch("copairing needs a common target")
    return Nil2Hom(sum(h.source_rank for h in homs), m,
                   tuple(im for h in homs for im in h.images))


def structural_map(kind: str, **params) -> Nil2Hom:
    """Named homomorphisms by kind.

    ``identity(n)``, ``zero(n, m)``, ``alpha(n)`` product of generators,
    ``beta(n)`` fold ``F_n -> Z``, ``xi(k)``, ``retraction(n, e)``,
    ``inclusion(n, e)``, ``fold(n, m)`` (rank ``nm -> n``),
    ``inject(src, tgt, index_map)``, ``project(src, tgt, index_map)``.
    """
    try:
        if kind == "identity":
            return identity_hom(params["n"])
        if kind == "zero":
            return zero_hom(params["n"], params["m"])
        if kind == "alpha":
            return product_hom(params["n"])
        if kind == "beta":
            return fold_hom(1, params["n"])
        if kind == "xi":
            return power_hom(params["k"])
        if kind == "retraction":
            return retraction_hom(params["n"], params["e"])
        if kind == "inclusion":
            return inclusion_hom(params["n"], params["e"])
        if kind == "fold":
            return fold_hom(params["n"], params["m"])
        if kind == "inject":
            return injection_hom(params["src"], params["tgt"], params["index_map"])
        if kind == "project":
            return projection_hom(params["src"], params["tgt"], params["index_map"])
    except KeyError as exc:
        raise MalformedInput(f"structural map {kind!r} needs parameter {exc}") from None
    raise MalformedInput(f"unknown structural map kind {kind!r}")


def parse_structural(text: str) -> Nil2Hom:
    """Parse shorthands like ``xi:-1``, ``alpha:3``, ``beta:2``, ``r:3:1``, ``i:3:2``,
    ``id:2``, ``zero:2:1``, ``fold:2:3``."""
    parts = text.strip().split(":")
    head, args = parts[0], parts[1:]
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise MalformedInput(f"bad structural map {text!r}") from None
    table = {
        "id": ("identity", ("n",)), "zero": ("zero", ("n", "m")),
        "alpha": ("alpha", ("n",)), "beta": ("beta", ("n",)), "xi": ("xi", ("k",)),
        "r": ("retraction", ("n", "e")), "i": ("inclusion", ("n", "e")),
        "fold": ("fold", ("n", "m")),
    }
    if head not in table or len(nums) != len(table[head][1]):
        raise MalformedInput(f"bad structural map {text!r}")
    kind, names = table[head]
    return structural_map(kind, **dict(zip(names, nums)))


# -- enumeration and sampling ----------------------------------------------

def words_up_to(rank: int, length: int) -> Iterator[FreeWord]:
    """All words over ``x_i^{+-1}`` of length ``<= length`` (unreduced, with repeats)."""
    alphabet = [(g, s) for g in range(1, rank + 1) for s in (1, -1)]
    for L in range(length + 1):
        for letters in itertools.product(alphabet, repeat=L):
            yield FreeWord(rank, letters)


@lru_cache(maxsize=None)
def elements_up_to(rank: int, length: int) -> tuple[Nil2Element, ...]:
    """Distinct class-2 elements represented by words of length ``<= length``,
    sorted deterministically."""
    seen = {Nil2Element.identity(rank)}
    frontier = set(seen)
    gens = []
    for g in range(rank):
        x = Nil2Element.generator(rank, g)
        gens.extend([x, nil2_inv(x)])
    for _ in range(length):
        nxt = set()
        for a in frontier:
            for x in gens:
                b = nil2_mul(a, x)
                if b not in seen:
                    nxt.add(b)
        seen |= nxt
        frontier = nxt
    return tuple(sorted(seen, key=lambda e: (sum(map(abs, e.gen)) + sum(map(abs, e.comm)), e.gen, e.comm)))


def random_word(rng: random.Random, rank: int, length: int) -> FreeWord:
    return FreeWord(rank, tuple((rng.randint(1, rank), rng.choice((1, -1))) for _ in range(length)))


def random_element(rng: random.Random, rank: int, bound: int = 3) -> Nil2Element:
    gen = tuple(rng.randint(-bound, bound) for _ in range(rank))
    comm = tuple(rng.randint(-bound, bound) for _ in range(rank * (rank - 1) // 2))
    return Nil2Element(rank, gen, comm)


def random_hom(rng: random.Random, n: int, m: int, bound: int = 2) -> Nil2Hom:
    return Nil2Hom(n, m, tuple(random_element(rng, m, bound) for _ in range(n)))
