"""Print H^n of every fixture system for n = 0..max_degree."""
import time

from trackgamma.cohomology import cohomology_group
from trackgamma.config import CohomologyConfig, parse_config
from trackgamma.fixtures import fixture_systems, table_fixtures


def main(cfg: CohomologyConfig):
    systems = {name: d for name, (_, d) in fixture_systems().items()}
    systems.update({f"table {name}": ext.system for name, ext in table_fixtures().items()})
    names = cfg.systems or sorted(systems)
    degrees = range(cfg.max_degree + 1)
    print(f"{'system':<24}" + "".join(f"{'H^' + str(n):>28}" for n in degrees) + f"{'time':>9}")
    for name in names:
        t0 = time.perf_counter()
        groups = [str(cohomology_group(systems[name], n).group) for n in degrees]
        print(f"{name:<24}" + "".join(f"{g:>28}" for g in groups) + f"{time.perf_counter() - t0:>8.2f}s")


if __name__ == "__main__":
    main(parse_config(CohomologyConfig, description=__doc__))
