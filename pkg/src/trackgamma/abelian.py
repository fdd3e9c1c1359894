"""Finitely generated abelian groups in invariant-factor form, subquotients,
and matrices with entries in such a group."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import intlinalg as il


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class AbGroup:
    """``Z^free_rank + Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ...``.

    Coordinates list the torsion summands first, then the free ones.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise GroupError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise GroupError(f"torsion factor {d} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise GroupError(f"torsion factors {self.torsion} not in divisibility order")

    @classmethod
    def cyclic(cls, n: int) -> "AbGroup":
        if n == 0:
            return cls(1, ())
        if n == 1:
            return cls(0, ())
        return cls(0, (n,))

    @classmethod
    def from_moduli(cls, moduli: Sequence[int]) -> "AbGroup":
        """Normalize an arbitrary direct sum of cyclic groups ``Z/m`` (0 = free)."""
        s = il.invariant_factors(il.relation_matrix(moduli)) if moduli else []
        free = len(moduli) - len(s)
        return cls(free, tuple(d for d in s if d != 1))

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.torsion + (0,) * self.free_rank

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.ngens:
            raise GroupError(f"vector {tuple(x)} has wrong length for {self}")
        return il.reduce_vec(x, self.moduli)

    def add(self, x, y):
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x):
        return self.reduce([-a for a in x])

    def sub(self, x, y):
        return self.reduce([a - b for a, b in zip(x, y)])

    def scale(self, k: int, x):
        return self.reduce([k * a for a in x])

    def elements(self) -> Iterator[tuple[int, ...]]:
        if self.free_rank:
            raise GroupError("infinite group has no element enumeration")
        return itertools.product(*[range(d) for d in self.torsion])

    def generators(self) -> list[tuple[int, ...]]:
        out = []
        for i in range(self.ngens):
            e = [0] * self.ngens
            e[i] = 1
            out.append(tuple(e))
        return out

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, doc) -> "AbGroup":
        return cls(int(doc.get("free_rank", 0)), tuple(doc.get("torsion", ())))


def direct_sum(groups: Sequence[AbGroup]) -> list[int]:
    """Moduli of the coordinate-wise direct sum (not normalized)."""
    out: list[int] = []
    for g in groups:
        out.extend(g.moduli)
    return out


def check_hom(mat: il.Matrix, src: AbGroup, dst: AbGroup) -> bool:
    """Whether an integer matrix defines a homomorphism ``src -> dst``."""
    for j, d in enumerate(src.moduli):
        if d:
            col = [row[j] * d for row in mat]
            if any(dst.reduce(col)):
                return False
    return True


@dataclass
class Subquotient:
    """``ker(out) / im(inc)`` for maps ``A --inc--> B --out--> C`` given on coordinates.

    ``group`` is the result in invariant-factor form and ``coords`` maps a
    cycle of ``B`` to its class coordinates.
    """

    group: AbGroup
    _kbasis: il.Matrix
    _u: il.Matrix
    _keep: list[tuple[int, int]]  # (row of U, modulus) kept in the result
    _bmoduli: tuple[int, ...]
    _out: il.Matrix
    _cmoduli: tuple[int, ...]
    _rank_k: int = field(default=0)

    def is_cycle(self, x: Sequence[int]) -> bool:
        y = il.matvec(self._out, x) if self._out else []
        return not any(il.reduce_vec(y, self._cmoduli))

    def coords(self, x: Sequence[int]) -> tuple[int, ...]:
        if not self.is_cycle(x):
            raise GroupError("not a cycle")
        r = self._rank_k
        if r == 0:
            return ()
        y = il.solve_integer(self._kbasis, list(x), len(self._bmoduli), r)
        if y is None:
            # x is a cycle only modulo the relations of B; shift by relations
            rel = il.relation_matrix(self._bmoduli)
            aug = il.hstack([self._kbasis, rel], len(self._bmoduli))
            width = r + (len(rel[0]) if rel and rel[0] else 0)
            sol = il.solve_integer(aug, list(x), len(self._bmoduli), width)
            assert sol is not None, "cycle outside the kernel lattice"
            y = sol[:r]
        z = il.matvec(self._u, y)
        return tuple(z[i] % d if d else z[i] for i, d in self._keep)


def subquotient(inc: il.Matrix | None, out: il.Matrix | None, a: Sequence[int],
                b: Sequence[int], c: Sequence[int]) -> Subquotient:
    """Homology at the middle of ``A -> B -> C`` with the given moduli lists."""
    nb = len(b)
    nc = len(c)
    na = len(a)
    # kernel lattice of B -> C (contains the relations of B)
    if nc and nb:
        kgens = il.kernel_modular(out, list(b), list(c))
    else:
        kgens = il.identity(nb)
    kb = il.lattice_basis(kgens, nb) if nb else []
    r = len(kb[0]) if kb and kb[0] else 0
    # image lattice generators: inc columns plus relations of B
    img_cols: list[list[int]] = []
    if inc is not None and na and nb:
        for j in range(na):
            img_cols.append([inc[i][j] for i in range(nb)])
    for j, d in enumerate(b):
        if d:
            e = [0] * nb
            e[j] = d
            img_cols.append(e)
    q = il.zeros(r, len(img_cols))
    for t, col in enumerate(img_cols):
        y = il.solve_integer(kb, col, nb, r)
        assert y is not None, "image not contained in kernel: not a complex"
        for i in range(r):
            q[i][t] = y[i]
    if r:
        s, u, _ = il.smith_normal_form(q, r, len(img_cols))
        diag = [s[i][i] if i < len(img_cols) else 0 for i in range(r)]
    else:
        u, diag = [], []
    keep = [(i, d) for i, d in enumerate(diag) if d != 1]
    torsion = tuple(d for _, d in keep if d)
    free = sum(1 for _, d in keep if d == 0)
    # order: torsion first, then free, matching AbGroup coordinates
    keep.sort(key=lambda p: (p[1] == 0,))
    return Subquotient(AbGroup(free, torsion), kb, u, keep, tuple(b), out or [], tuple(c), r)


class MMatrix:
    """A matrix with entries in a fixed abelian group ``M``.

    Stored as one integer array per cyclic summand of ``M``; every entry of
    summand ``c`` is reduced modulo ``M.moduli[c]``.
    """

    __slots__ = ("group", "comps", "shape")

    def __init__(self, group: AbGroup, comps, shape: tuple[int, int]):
        self.group = group
        self.shape = shape
        self.comps = tuple(_reduce_arr(np.asarray(a, dtype=object).reshape(shape), d)
                           for a, d in zip(comps, group.moduli))

    @classmethod
    def zeros(cls, group: AbGroup, rows: int, cols: int) -> "MMatrix":
        z = np.zeros((rows, cols), dtype=object)
        return cls(group, [z] * group.ngens, (rows, cols))

    @classmethod
    def from_entries(cls, group: AbGroup, entries) -> "MMatrix":
        """``entries[i][j]`` is a coordinate tuple of ``M``."""
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        comps = []
        for c in range(group.ngens):
            comps.append(np.array([[entries[i][j][c] for j in range(cols)] for i in range(rows)],
                                  dtype=object).reshape(rows, cols))
        return cls(group, comps, (rows, cols))

    @classmethod
    def unit(cls, group: AbGroup, rows: int, cols: int, i: int, j: int, value) -> "MMatrix":
        comps = []
        for c in range(group.ngens):
            a = np.zeros((rows, cols), dtype=object)
            a[i, j] = value[c]
            comps.append(a)
        return cls(group, comps, (rows, cols))

    def entry(self, i: int, j: int) -> tuple[int, ...]:
        return tuple(int(a[i, j]) for a in self.comps)

    def entries(self) -> list[list[tuple[int, ...]]]:
        return [[self.entry(i, j) for j in range(self.shape[1])] for i in range(self.shape[0])]

    def is_zero(self) -> bool:
        return all(not a.any() for a in self.comps)

    def __add__(self, other: "MMatrix") -> "MMatrix":
        self._check(other)
        return MMatrix(self.group, [a + b for a, b in zip(self.comps, other.comps)], self.shape)

    def __sub__(self, other: "MMatrix") -> "MMatrix":
        self._check(other)
        return MMatrix(self.group, [a - b for a, b in zip(self.comps, other.comps)], self.shape)

    def __neg__(self) -> "MMatrix":
        return MMatrix(self.group, [-a for a in self.comps], self.shape)

    def scaled(self, k: int) -> "MMatrix":
        return MMatrix(self.group, [k * a for a in self.comps], self.shape)

    def lmul(self, a) -> "MMatrix":
        """Integer matrix times this matrix."""
        a = np.asarray(a, dtype=object)
        if a.shape[1] != self.shape[0]:
            raise GroupError(f"shape mismatch {a.shape} @ {self.shape}")
        rows = a.shape[0]
        return MMatrix(self.group, [_dot(a, x, rows, self.shape[1]) for x in self.comps],
                       (rows, self.shape[1]))

    def rmul(self, b) -> "MMatrix":
        """This matrix times an integer matrix."""
        b = np.asarray(b, dtype=object)
        if b.shape[0] != self.shape[1]:
            raise GroupError(f"shape mismatch {self.shape} @ {b.shape}")
        cols = b.shape[1]
        return MMatrix(self.group, [_dot(x, b, self.shape[0], cols) for x in self.comps],
                       (self.shape[0], cols))

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "MMatrix":
        return MMatrix(self.group, [a[r0:r1, c0:c1] for a in self.comps], (r1 - r0, c1 - c0))

    @staticmethod
    def hstack(group: AbGroup, blocks: Sequence["MMatrix"], rows: int) -> "MMatrix":
        if not blocks:
            return MMatrix.zeros(group, rows, 0)
        comps = [np.concatenate([b.comps[c] for b in blocks], axis=1) for c in range(group.ngens)]
        return MMatrix(group, comps, (rows, sum(b.shape[1] for b in blocks)))

    @staticmethod
    def vstack(group: AbGroup, blocks: Sequence["MMatrix"], cols: int) -> "MMatrix":
        if not blocks:
            return MMatrix.zeros(group, 0, cols)
        comps = [np.concatenate([b.comps[c] for b in blocks], axis=0) for c in range(group.ngens)]
        return MMatrix(group, comps, (sum(b.shape[0] for b in blocks), cols))

    @staticmethod
    def block_diag(group: AbGroup, blocks: Sequence["MMatrix"]) -> "MMatrix":
        rows = sum(b.shape[0] for b in blocks)
        cols = sum(b.shape[1] for b in blocks)
        out = [np.zeros((rows, cols), dtype=object) for _ in range(group.ngens)]
        r = c = 0
        for b in blocks:
            for k in range(group.ngens):
                out[k][r:r + b.shape[0], c:c + b.shape[1]] = b.comps[k]
            r += b.shape[0]
            c += b.shape[1]
        return MMatrix(group, out, (rows, cols))

    def flat(self) -> list[int]:
        """Coordinates in row-major entry order, summands innermost."""
        out = []
        for i in range(self.shape[0]):
            for j in range(self.shape[1]):
                out.extend(int(a[i, j]) for a in self.comps)
        return out

    @classmethod
    def from_flat(cls, group: AbGroup, flat: Sequence[int], rows: int, cols: int) -> "MMatrix":
        k = group.ngens
        comps = [np.zeros((rows, cols), dtype=object) for _ in range(k)]
        t = 0
        for i in range(rows):
            for j in range(cols):
                for c in range(k):
                    comps[c][i, j] = int(flat[t])
                    t += 1
        return cls(group, comps, (rows, cols))

    def _check(self, other: "MMatrix"):
        if self.shape != other.shape or self.group != other.group:
            raise GroupError(f"incompatible M-matrices {self.shape} vs {other.shape}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, MMatrix):
            return NotImplemented
        return (self.group == other.group and self.shape == other.shape
                and all(np.array_equal(a, b) for a, b in zip(self.comps, other.comps)))

    def __hash__(self):
        return hash((self.group, self.shape, tuple(self.flat())))

    def __repr__(self) -> str:
        return f"MMatrix({self.group}, {self.entries()})"

    def to_json(self):
        return [[list(e) for e in row] for row in self.entries()]


def _reduce_arr(a, d: int):
    if d:
        return a % d
    return a


def _dot(a, b, rows: int, cols: int):
    if a.shape[1] == 0:
        return np.zeros((rows, cols), dtype=object)
    return a.dot(b)
