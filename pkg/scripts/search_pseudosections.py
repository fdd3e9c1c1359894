"""Enumerate every normalized section of each table fixture and count those
with vanishing associativity defect, next to the class and the solver result."""
import itertools
import time

from trackgamma.cohomology import NoSolution, SectionData, class_of, extension_cocycle, solve_pseudosection
from trackgamma.config import SearchConfig, parse_config
from trackgamma.fixtures import table_fixtures


def sections(ext):
    C, E = ext.base, ext.underlying
    mors = sorted(C.morphisms)
    lifts = [[E.identities[C.src[f]]] if C.is_identity(f)
             else sorted(g for g in E.morphisms if ext.proj[g] == f) for f in mors]
    pairs = [(f, g) for f in mors for g in mors
             if C.composable(f, g) and not (C.is_identity(f) or C.is_identity(g))]
    for choice in itertools.product(*lifts):
        t = dict(zip(mors, choice))
        options = [ext.tracks_between(E.comp(t[f], t[g]), t[C.comp(f, g)]) for f, g in pairs]
        for hs in itertools.product(*options):
            yield SectionData(t, dict(zip(pairs, hs)), ext)


def main(cfg: SearchConfig):
    fixtures = table_fixtures()
    print(f"{'fixture':<18}{'class':>12}{'examined':>10}{'solutions':>11}{'solver':>12}{'time':>9}")
    for name in cfg.fixtures or fixtures:
        ext = fixtures[name]
        t0 = time.perf_counter()
        examined = found = 0
        for s in sections(ext):
            examined += 1
            if extension_cocycle(ext, s, check=False).is_zero():
                found += 1
                if cfg.stop_at_first:
                    break
        solver = "NoSolution" if isinstance(solve_pseudosection(ext), NoSolution) else "section"
        print(f"{name:<18}{class_of(ext).label():>12}{examined:>10}{found:>11}{solver:>12}"
              f"{time.perf_counter() - t0:>8.2f}s")


if __name__ == "__main__":
    main(parse_config(SearchConfig, description=__doc__))
