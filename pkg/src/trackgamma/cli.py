"""Command line: ``trackgamma <verb> <subverb> [options]``.

Exit status: 0 success, 1 verified negative result, 2 parse or usage error,
3 validation failure.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any

from . import io
from .cohomology import (NoSolution, class_of, coboundary, cohomology_group,
                         solve_pseudosection)
from .fixtures import fixture_systems, table_fixtures
from .gamma import (StructureError, canonical_gamma, equivalence_pair, grid_alphas, grid_pairs,
                    perturbed_cogroup, self_track_generators, strict_cogroup, structural_homs,
                    verify_naturality, verify_property_gamma, verify_trivial_tracks)
from .nilgroup import (MalformedInput, RankMismatch, block_sum, format_element, hom_compose,
                       nil2_mul, nil2_normalize, parse_element, parse_word, power_hom)
from .trackcat import SplitModel, TrackError, dualize, verify_linear_extension

EXIT_OK, EXIT_NEGATIVE, EXIT_PARSE, EXIT_INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- rendering -----------------------------------------------------------------

def render_text(doc: Any) -> str:
    if isinstance(doc, dict) and "statements" in doc:
        rows = [(s["statement"], s["status"], str(s["checked"]), str(s["failed"])) for s in doc["statements"]]
        head = ("statement", "status", "checked", "failed")
        widths = [max(len(r[i]) for r in rows + [head]) for i in range(4)]
        lines = [f"{doc['report']}  (seed {doc.get('seed')})  {'PASS' if doc['ok'] else 'FAIL'}"]
        lines.append("  ".join(h.ljust(w) for h, w in zip(head, widths)))
        lines.append("  ".join("-" * w for w in widths))
        lines.extend("  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows)
        for s in doc["statements"]:
            if s["status"] == "fail":
                lines.append(f"first witness for '{s['statement']}': {s['witnesses'][0]}")
        return "\n".join(lines)
    if isinstance(doc, dict):
        width = max((len(k) for k in doc), default=0)
        return "\n".join(f"{k.ljust(width)}  {json.dumps(v) if isinstance(v, (dict, list)) else v}"
                         for k, v in doc.items())
    return str(doc)


def emit(doc, args) -> None:
    print(render_text(doc) if getattr(args, "text", False) else io.dumps(doc))


# -- input helpers -----------------------------------------------------------------

def _rank_of(texts) -> int:
    import re
    idx = [int(m) for t in texts for m in re.findall(r"x(\d+)", t)]
    return max(idx, default=1)


def load_system(args):
    if args.fixture:
        systems = fixture_systems()
        if args.fixture not in systems:
            raise UsageError(f"unknown fixture {args.fixture!r}; choose from {sorted(systems)}")
        return systems[args.fixture][1]
    if not args.system:
        raise UsageError("give --system FILE or --fixture NAME")
    return io.system_from_json(io.load(args.system))


def load_extension(args, validate: bool = True):
    if args.fixture:
        fx = table_fixtures()
        if args.fixture not in fx:
            raise UsageError(f"unknown fixture {args.fixture!r}; choose from {sorted(fx)}")
        return fx[args.fixture]
    if args.split:
        return SplitModel(io.group_from_json(args.split, "/M"), args.max_rank)
    if not args.input:
        raise UsageError("give an extension file, --fixture NAME or --split GROUP")
    doc = io.load(args.input)
    if isinstance(doc, dict) and doc.get("kind") == "table" and not validate:
        return io.table_from_json(doc, validate=False)
    return io.extension_from_json(doc)


# -- verbs -----------------------------------------------------------------------

def cmd_nil2(args) -> int:
    if args.sub == "mul":
        rank = args.rank or _rank_of([args.a, args.b])
        out = nil2_mul(parse_element(args.a, rank), parse_element(args.b, rank))
        emit({"rank": rank, "product": format_element(out)}, args)
    elif args.sub == "normalize":
        rank = args.rank or _rank_of([args.word])
        emit({"rank": rank, "normal_form": format_element(nil2_normalize(parse_word(args.word, rank)))}, args)
    else:
        f, g = io.hom_from_text(args.f, "/f"), io.hom_from_text(args.g, "/g")
        h = hom_compose(f, g)
        emit({"source_rank": h.source_rank, "target_rank": h.target_rank, "images": h.to_strings()}, args)
    return EXIT_OK


def cmd_cohomology(args) -> int:
    d = load_system(args)
    if args.sub == "group":
        H = cohomology_group(d, args.degree)
        emit({"degree": args.degree, "group": str(H.group), "moduli": list(H.group.moduli)}, args)
        return EXIT_OK
    if not args.cochain:
        raise UsageError("coboundary needs --cochain FILE")
    sigma = io.cochain_from_json(io.load(args.cochain), d)
    emit(coboundary(sigma).to_json(), args)
    return EXIT_OK


def cmd_extension(args) -> int:
    if args.sub == "verify":
        ext = load_extension(args, validate=False)
        rep = verify_linear_extension(ext, samples=args.samples, seed=args.seed)
        rep.seed = args.seed
        emit(rep.to_json(), args)
        return EXIT_OK if rep.ok else EXIT_INVALID
    ext = load_extension(args)
    if args.sub == "class":
        cls = class_of(ext)
        doc = {"H3_class": cls.label(), "coords": list(cls.coords),
               "group": str(cls.group) if cls.group is not None else None}
        if cls.note:
            doc["note"] = cls.note
        emit(doc, args)
        return EXIT_OK
    if args.sub == "pseudosection":
        res = solve_pseudosection(ext)
        if isinstance(res, NoSolution):
            emit(res.to_json(), args)
            return EXIT_NEGATIVE
        doc = {"result": "pseudosection", "section": res.to_json()}
        if isinstance(ext, SplitModel):
            doc["section"] = {"t": "commutator-free lift", "H": "tracks with zero coordinates"}
        emit(doc, args)
        return EXIT_OK
    emit(dualize(ext).to_json(), args)
    return EXIT_OK


def _structures(args, model):
    if args.structure == "strict":
        return strict_cogroup(model, 1), strict_cogroup(model, 1), strict_cogroup(model, 1)
    return tuple(perturbed_cogroup(model, 1, args.seed + k) for k in range(3))


def cmd_gamma(args) -> int:
    M = io.group_from_json(args.M, "/M")
    model = SplitModel(M, args.max_rank)
    f = io.hom_from_text(args.f, "/f")
    if (f.source_rank, f.target_rank) != (1, 1):
        raise UsageError("f must be a map Z -> Z")
    if args.sub == "equivalence":
        E = equivalence_pair(model, args.theory)
        rep = E.verify(seed=args.seed, samples=args.samples)
        emit(rep.to_json(), args)
        return EXIT_OK if rep.ok else EXIT_NEGATIVE
    X, Y, Z = _structures(args, model)
    I = canonical_gamma(f, X, Y)
    if args.sub == "build":
        alphas = [io.hom_from_text(a, f"/alpha/{k}") for k, a in enumerate(args.alpha)] or structural_homs(2)
        out = []
        for al in alphas:
            t = I.track(al)
            out.append({"alpha": str(al), "src": t.src.to_strings(), "tgt": t.tgt.to_strings(),
                        "coords": t.coords.to_json()})
        emit({"f": str(f), "M": str(M), "structure": args.structure, "seed": args.seed, "tracks": out}, args)
        return EXIT_OK
    if args.sub == "verify":
        pairs = grid_pairs(args.max_rank, args.length, seed=args.seed)
        rep = verify_property_gamma(I, pairs, seed=args.seed)
        rep.merge(verify_trivial_tracks(I, args.max_rank))
        for n in range(-5, 6):
            for m in range(-5, 6):
                ok = I.box(power_hom(n), power_hom(m), I.mu(n), I.mu(m)) == I.mu(n * m)
                rep.check("mu_n [x] mu_m = mu_{nm}", ok, [n, m])
        rng = random.Random(args.seed)
        alphas = grid_alphas(min(args.max_rank, 2), 2)
        for _ in range(20):
            a, b = rng.choice(alphas), rng.choice(alphas)
            rep.check("Gamma of a sum is the sum of Gammas", I.gamma(block_sum([a, b]))
                      == type(I.gamma(a)).block_diag(M, [I.gamma(a), I.gamma(b)]), [str(a), str(b)])
        rep.info = {"pairs": len(pairs), "f": str(f), "M": str(M), "structure": args.structure}
        emit(rep.to_json(), args)
        return EXIT_OK if rep.ok else EXIT_NEGATIVE
    # naturality
    g = io.hom_from_text(args.g, "/g")
    Ig = canonical_gamma(g, Y, Z)
    alphas = grid_alphas(min(args.max_rank, 3), min(args.length, 2))
    rep = verify_naturality(I, Ig, alphas=alphas, seed=args.seed)
    for psi in self_track_generators(model, f):
        rep.merge(verify_naturality(I, psi=psi, alphas=alphas))
    rep.info = {"f": str(f), "g": str(g), "M": str(M), "structure": args.structure}
    emit(rep.to_json(), args)
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


# -- parser -----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="trackgamma", description="Track categories, cohomology and interchange tracks.")
    verbs = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--text", action="store_true", help="aligned text instead of JSON")
        sp.add_argument("--seed", type=int, default=0)

    n = verbs.add_parser("nil2", help="class-2 nilpotent group arithmetic")
    nsub = n.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    m = nsub.add_parser("mul")
    m.add_argument("a")
    m.add_argument("b")
    m.add_argument("--rank", type=int)
    nz = nsub.add_parser("normalize")
    nz.add_argument("word")
    nz.add_argument("--rank", type=int)
    c = nsub.add_parser("compose", help="f o g; maps as 'xi:2' or 'F2: x1 x2; x2^-1'")
    c.add_argument("f")
    c.add_argument("g")
    for sp in (m, nz, c):
        common(sp)

    h = verbs.add_parser("cohomology", help="cohomology of small categories")
    hsub = h.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name in ("group", "coboundary"):
        sp = hsub.add_parser(name)
        sp.add_argument("--system", help="natural system JSON (with its category)")
        sp.add_argument("--fixture", help="built-in category and coefficients")
        if name == "group":
            sp.add_argument("--degree", type=int, required=True)
        else:
            sp.add_argument("--cochain", help="cochain JSON")
        common(sp)

    e = verbs.add_parser("extension", help="linear track extensions")
    esub = e.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name in ("verify", "class", "pseudosection", "dualize"):
        sp = esub.add_parser(name)
        sp.add_argument("input", nargs="?", help="table extension or split-model descriptor JSON")
        sp.add_argument("--fixture", help="built-in table extension")
        sp.add_argument("--split", metavar="GROUP", help="split model over this coefficient group")
        sp.add_argument("--max-rank", type=int, default=3)
        sp.add_argument("--samples", type=int, default=200)
        common(sp)

    g = verbs.add_parser("gamma", help="interchange tracks in split models")
    gsub = g.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name in ("build", "verify", "naturality", "equivalence"):
        sp = gsub.add_parser(name)
        sp.add_argument("--M", default="Z/4", help="coefficient group, e.g. Z/4 or Z+Z/2")
        sp.add_argument("--f", default="xi:2", help="map Z -> Z")
        sp.add_argument("--max-rank", type=int, default=3)
        sp.add_argument("--length", type=int, default=4, help="word length bound of the grid")
        sp.add_argument("--structure", choices=("strict", "perturbed"), default="strict")
        if name == "build":
            sp.add_argument("--alpha", action="append", default=[])
        if name == "naturality":
            sp.add_argument("--g", default="xi:3")
        if name == "equivalence":
            sp.add_argument("--theory", choices=("nil1", "nil2"), default="nil2")
            sp.add_argument("--samples", type=int, default=50)
        common(sp)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"nil2": cmd_nil2, "cohomology": cmd_cohomology, "extension": cmd_extension, "gamma": cmd_gamma}
    try:
        return handlers[args.verb](args)
    except io.ValidationError as exc:
        doc = exc.report.to_json()
        doc["error"] = str(exc)
        print(io.dumps(doc))
        print(f"trackgamma: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (io.ParseError, MalformedInput, RankMismatch, UsageError) as exc:
        print(f"trackgamma: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (TrackError, StructureError, ValueError) as exc:
        print(f"trackgamma: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
