"""JSON documents for categories, natural systems, extensions, cochains and
pasting schemes, with diagnostics located by JSON pointer.

Malformed documents raise ``ParseError``; well-formed documents whose data
fail a validator raise ``ValidationError`` carrying the validator's report.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .abelian import AbGroup, MMatrix
from .catcore import (CategoryError, FinCategory, NaturalSystem, validate_category,
                      validate_natural_system)
from .cohomology import Cochain
from .fixtures import parse_group
from .nilgroup import MalformedInput, Nil2Hom, RankMismatch, parse_element, parse_structural
from .reports import Report
from .trackcat import PastingScheme, SplitModel, TableExtension, verify_linear_extension


class ParseError(ValueError):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"
        self.message = message


class ValidationError(ValueError):
    def __init__(self, what: str, report: Report):
        v = report.first_violation()
        super().__init__(f"{what} fails validation: {v['statement']} at {json.dumps(v['witness'])}"
                         if v else f"{what} fails validation")
        self.report = report


def load(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _get(doc, key, ptr, kind=None):
    if not isinstance(doc, dict):
        raise ParseError(ptr, "expected an object")
    if key not in doc:
        raise ParseError(ptr, f"missing field {key!r}")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise ParseError(f"{ptr}/{key}", f"expected {kind.__name__ if isinstance(kind, type) else 'a value'}")
    return val


def _list(val, ptr) -> list:
    if not isinstance(val, list):
        raise ParseError(ptr, "expected an array")
    return val


def _str(val, ptr) -> str:
    if not isinstance(val, str):
        raise ParseError(ptr, "expected a string")
    return val


def _int(val, ptr) -> int:
    if isinstance(val, bool) or not isinstance(val, int):
        raise ParseError(ptr, "expected an integer")
    return val


def group_from_json(doc, ptr: str = "") -> AbGroup:
    """``"Z/4"``-style text or ``{"free_rank": r, "torsion": [...]}``."""
    if isinstance(doc, str):
        try:
            return parse_group(doc)
        except ValueError as exc:
            raise ParseError(ptr, str(exc)) from None
    if isinstance(doc, dict):
        free = _int(doc.get("free_rank", 0), f"{ptr}/free_rank")
        tors = [_int(d, f"{ptr}/torsion/{i}") for i, d in enumerate(_list(doc.get("torsion", []), f"{ptr}/torsion"))]
        if any(d < 2 for d in tors) or free < 0:
            raise ParseError(ptr, "torsion orders must be at least 2 and the free rank non-negative")
        return AbGroup.from_moduli(tors + [0] * free)
    raise ParseError(ptr, "expected a group")


def category_from_json(doc, ptr: str = "", validate: bool = True) -> FinCategory:
    """``{"objects", "morphisms": [{"id","src","tgt"}], "identities", "compose": [[g, f, f o g]]}``."""
    objs = [_str(o, f"{ptr}/objects/{i}") for i, o in enumerate(_list(_get(doc, "objects", ptr), f"{ptr}/objects"))]
    arrows = []
    for i, m in enumerate(_list(_get(doc, "morphisms", ptr), f"{ptr}/morphisms")):
        p = f"{ptr}/morphisms/{i}"
        arrows.append((_str(_get(m, "id", p), f"{p}/id"), _str(_get(m, "src", p), f"{p}/src"),
                       _str(_get(m, "tgt", p), f"{p}/tgt")))
    ids = _get(doc, "identities", ptr, dict)
    table = {}
    for i, t in enumerate(_list(_get(doc, "compose", ptr), f"{ptr}/compose")):
        p = f"{ptr}/compose/{i}"
        t = _list(t, p)
        if len(t) != 3:
            raise ParseError(p, "a composition entry is [first, second, composite]")
        g, f, h = (_str(x, f"{p}/{k}") for k, x in enumerate(t))
        if (f, g) in table and table[(f, g)] != h:
            raise ParseError(p, f"conflicting composites for {g} then {f}")
        table[(f, g)] = h
    try:
        c = FinCategory.build(objs, arrows, ids, table, doc.get("name", ""))
    except CategoryError as exc:
        raise ParseError(f"{ptr}/morphisms", str(exc)) from None
    if validate:
        rep = validate_category(c)
        if not rep.ok:
            raise ValidationError("category", rep)
    return c


def _matrix(val, rows: int, cols: int, ptr: str) -> np.ndarray:
    val = _list(val, ptr)
    if len(val) != rows or any(not isinstance(r, list) or len(r) != cols for r in val):
        raise ParseError(ptr, f"expected a {rows} x {cols} integer matrix")
    out = np.zeros((rows, cols), dtype=object)
    for i, r in enumerate(val):
        for j, v in enumerate(r):
            out[i, j] = _int(v, f"{ptr}/{i}/{j}")
    return out


def system_from_json(doc, category: FinCategory | None = None, ptr: str = "",
                     validate: bool = True) -> NaturalSystem:
    """``{"category", "groups": {f: group}, "push": [[f, g, matrix]], "pull": [...]}``;
    ``"constant": group`` replaces groups and actions by a constant system."""
    if category is None:
        category = category_from_json(_get(doc, "category", ptr), f"{ptr}/category")
    c = category
    if "constant" in doc:
        return NaturalSystem.constant(c, group_from_json(doc["constant"], f"{ptr}/constant"))
    gdoc = _get(doc, "groups", ptr, dict)
    groups = {}
    for f in c.morphisms:
        if f not in gdoc:
            raise ParseError(f"{ptr}/groups", f"no group for morphism {f!r}")
        groups[f] = group_from_json(gdoc[f], f"{ptr}/groups/{f}")
    tabs = {}
    for key in ("push", "pull"):
        tab = {}
        for i, e in enumerate(_list(_get(doc, key, ptr), f"{ptr}/{key}")):
            p = f"{ptr}/{key}/{i}"
            e = _list(e, p)
            if len(e) != 3:
                raise ParseError(p, "an action entry is [f, g, matrix]")
            f, g = _str(e[0], f"{p}/0"), _str(e[1], f"{p}/1")
            if f not in groups or g not in groups or not c.composable(f, g):
                raise ParseError(p, f"{f} and {g} are not composable morphisms")
            src = groups[g] if key == "push" else groups[f]
            tab[(f, g)] = _matrix(e[2], groups[c.comp(f, g)].ngens, src.ngens, f"{p}/2")
        for f in c.morphisms:
            for g in c.morphisms:
                if c.composable(f, g) and (f, g) not in tab:
                    raise ParseError(f"{ptr}/{key}", f"missing entry for ({f}, {g})")
        tabs[key] = tab
    d = NaturalSystem(c, groups, tabs["push"], tabs["pull"])
    if validate:
        rep = validate_natural_system(d)
        if not rep.ok:
            raise ValidationError("natural system", rep)
    return d


def split_from_json(doc, ptr: str = "") -> SplitModel:
    """``{"kind": "split", "M": group, "max_rank": 3}``."""
    M = group_from_json(_get(doc, "M", ptr), f"{ptr}/M")
    rank = _int(doc.get("max_rank", 3), f"{ptr}/max_rank")
    if rank < 1:
        raise ParseError(f"{ptr}/max_rank", "must be at least 1")
    return SplitModel(M, rank)


def table_from_json(doc, ptr: str = "", validate: bool = True) -> TableExtension:
    base = category_from_json(_get(doc, "base", ptr), f"{ptr}/base")
    system = system_from_json(_get(doc, "natural_system", ptr), base, f"{ptr}/natural_system")
    under = category_from_json(_get(doc, "underlying", ptr), f"{ptr}/underlying")
    proj = {str(k): _str(v, f"{ptr}/projection/{k}") for k, v in _get(doc, "projection", ptr, dict).items()}
    tsrc, ttgt = {}, {}
    for i, t in enumerate(_list(_get(doc, "tracks", ptr), f"{ptr}/tracks")):
        p = f"{ptr}/tracks/{i}"
        tid = _str(_get(t, "id", p), f"{p}/id")
        tsrc[tid] = _str(_get(t, "src", p), f"{p}/src")
        ttgt[tid] = _str(_get(t, "tgt", p), f"{p}/tgt")

    def pairs(key, swap=False):
        out = {}
        for i, e in enumerate(_list(_get(doc, key, ptr), f"{ptr}/{key}")):
            p = f"{ptr}/{key}/{i}"
            e = _list(e, p)
            if len(e) != 3:
                raise ParseError(p, "expected a triple")
            x, y, z = (_str(v, f"{p}/{k}") for k, v in enumerate(e))
            out[(y, x) if swap else (x, y)] = z
        return out

    sig = {}
    for i, e in enumerate(_list(_get(doc, "sigma", ptr), f"{ptr}/sigma")):
        p = f"{ptr}/sigma/{i}"
        e = _list(e, p)
        if len(e) != 3:
            raise ParseError(p, "a sigma entry is [map, coordinates, track]")
        sig[(_str(e[0], f"{p}/0"), tuple(_int(v, f"{p}/1/{k}") for k, v in enumerate(_list(e[1], f"{p}/1"))))] = \
            _str(e[2], f"{p}/2")
    ext = TableExtension(doc.get("name", ""), base, system, under, proj, tsrc, ttgt,
                         pairs("vertical", swap=True),
                         {str(k): _str(v, f"{ptr}/inverse/{k}") for k, v in _get(doc, "inverse", ptr, dict).items()},
                         {str(k): _str(v, f"{ptr}/identity/{k}") for k, v in _get(doc, "identity", ptr, dict).items()},
                         pairs("left_whisker"), pairs("right_whisker"), sig, doc.get("zero_object"))
    if validate:
        rep = verify_linear_extension(ext)
        if not rep.ok:
            raise ValidationError("linear track extension", rep)
    return ext


def extension_from_json(doc, ptr: str = ""):
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind == "split":
        return split_from_json(doc, ptr)
    if kind == "table":
        return table_from_json(doc, ptr)
    raise ParseError(f"{ptr}/kind", "expected \"split\" or \"table\"")


def cochain_from_json(doc, system: NaturalSystem, ptr: str = "") -> Cochain:
    """``{"degree": n, "values": [[chain, coordinates], ...]}``; degree-0 chains
    are ``[object]``."""
    _int(_get(doc, "degree", ptr), f"{ptr}/degree")
    try:
        return Cochain.from_json(system, doc)
    except ValueError as exc:
        msg = str(exc)
        if msg.startswith("/"):
            loc, _, rest = msg.partition(": ")
            raise ParseError(ptr + loc, rest) from None
        raise ParseError(ptr, msg) from None
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{ptr}/values", f"malformed value: {exc}") from None


def hom_from_text(text: str, ptr: str = "") -> Nil2Hom:
    """A structural name such as ``xi:-1``, ``alpha:3``, ``r:3:1``, or
    ``F<m>: w1; w2; ...`` listing generator images in ``F_m``."""
    text = text.strip()
    try:
        if text.startswith("F") and ":" in text:
            head, _, body = text.partition(":")
            m = int(head[1:])
            words = [w for w in body.split(";")]
            if words == [""]:
                words = []
            return Nil2Hom(len(words), m, tuple(parse_element(w.strip() or "1", m) for w in words))
        return parse_structural(text)
    except (MalformedInput, RankMismatch, ValueError) as exc:
        raise ParseError(ptr, f"cannot read map {text!r}: {exc}") from None


def split_track_from_json(model: SplitModel, doc, ptr: str = ""):
    src = hom_from_text(_str(_get(doc, "src", ptr), f"{ptr}/src"), f"{ptr}/src")
    tgt = hom_from_text(_str(_get(doc, "tgt", ptr), f"{ptr}/tgt"), f"{ptr}/tgt")
    rows, cols = src.target_rank, src.source_rank
    coords = _list(doc.get("coords", [[[0] * model.M.ngens] * cols] * rows), f"{ptr}/coords")
    try:
        M = MMatrix.from_entries(model.M, coords) if rows else MMatrix.zeros(model.M, 0, cols)
        return model.track(src, tgt, M)
    except Exception as exc:
        raise ParseError(ptr, str(exc)) from None


def pasting_from_json(doc, ext, ptr: str = "") -> PastingScheme:
    """``{"inputs": {name: track}, "steps": [[op, ...], ...]}``.  Table tracks are
    ids; split tracks are ``{"src", "tgt", "coords"}`` with maps as text."""
    inputs = {}
    for name, t in _get(doc, "inputs", ptr, dict).items():
        p = f"{ptr}/inputs/{name}"
        if isinstance(ext, TableExtension):
            tid = _str(t, p)
            if tid not in ext.track_src:
                raise ParseError(p, f"unknown track {tid!r}")
            inputs[name] = tid
        else:
            inputs[name] = split_track_from_json(ext, t, p)
    sch = PastingScheme(inputs)
    for i, st in enumerate(_list(doc.get("steps", []), f"{ptr}/steps")):
        p = f"{ptr}/steps/{i}"
        st = _list(st, p)
        if not st or st[0] not in ("vcomp", "inv", "lwhisk", "rwhisk"):
            raise ParseError(f"{p}/0", "unknown operation")
        if st[0] == "lwhisk" and not isinstance(ext, TableExtension):
            st = [st[0], hom_from_text(_str(st[1], f"{p}/1"), f"{p}/1"), st[2]]
        if st[0] == "rwhisk" and not isinstance(ext, TableExtension):
            st = [st[0], st[1], hom_from_text(_str(st[2], f"{p}/2"), f"{p}/2")]
        sch.add(*st)
    return sch


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)
