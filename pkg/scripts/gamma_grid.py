"""Property Gamma (and optionally uniqueness) on the grid of maps Z -> F_m."""
import time

from trackgamma.config import GridConfig, parse_config
from trackgamma.fixtures import parse_group
from trackgamma.gamma import (canonical_gamma, grid_alphas, grid_pairs, perturbed_cogroup,
                              verify_property_gamma, verify_uniqueness)
from trackgamma.nilgroup import power_hom
from trackgamma.trackcat import split_model


def main(cfg: GridConfig):
    pairs = grid_pairs(cfg.max_rank, cfg.length, seed=cfg.seed)
    alphas = grid_alphas(cfg.max_rank, cfg.length)
    print(f"{len(alphas)} grid maps, {len(pairs)} composable pairs")
    print(f"{'M':<8}{'f':>5}{'pairs':>8}{'failed':>8}{'perturbed':>11}{'undetected':>12}{'time':>9}")
    for g in cfg.groups:
        model = split_model(parse_group(g), cfg.max_rank)
        X, Y = (perturbed_cogroup(model, 1, s) for s in cfg.structure_seeds)
        for k in cfg.powers:
            t0 = time.perf_counter()
            I = canonical_gamma(power_hom(k), X, Y)
            rep = verify_property_gamma(I, pairs, seed=cfg.seed)
            res = next(iter(rep.statements.values()))
            pert = undetected = "-"
            if cfg.uniqueness:
                u = next(iter(verify_uniqueness(I, alphas).statements.values()))
                pert, undetected = u.checked, u.failed
            print(f"{g:<8}{'xi' + str(k):>5}{res.checked:>8}{res.failed:>8}{pert:>11}{undetected:>12}"
                  f"{time.perf_counter() - t0:>8.2f}s")


if __name__ == "__main__":
    main(parse_config(GridConfig, description=__doc__))
