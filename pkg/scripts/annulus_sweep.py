"""Random sweep over irrational annulus pairs.

Draws integer quadruples, builds the source/target annuli they induce,
and checks that the solver recovers the quadruple, that a shifted radius
is rejected, and that the member map is homogeneous on samples.

    python3 scripts/annulus_sweep.py --radicands 2 3 5 7 --count 200
"""
import argparse
import json
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from reinhardt_propmap import DomainSpec, QuadExt, decide
from reinhardt_propmap.verify import SamplePlan, check_homogeneity


@dataclass
class SweepConfig:
    radicands: list[int] = field(default_factory=lambda: [2, 3, 5])
    count: int = 100
    bound: int = 5
    seed: int = 0
    samples: int = 1000
    shift: Fraction = Fraction(1, 2)


def draw(rng, beta, bound):
    while True:
        k1, k2, l1, l2 = (rng.randint(-bound, bound) for _ in range(4))
        if k1 * l2 == k2 * l1:
            continue
        rho = beta * l1 + k1
        if rho.sign() > 0:
            return (k1, k2, l1, l2), rho, (beta * l2 + k2) / rho


def run(cfg: SweepConfig) -> list[dict]:
    plan = SamplePlan(count=cfg.samples, seed=cfg.seed)
    rows = []
    for d in cfg.radicands:
        rng = random.Random(cfg.seed * 1000 + d)
        beta = QuadExt.sqrt(d)
        recovered = rejected = 0
        worst = 0.0
        t0 = time.perf_counter()
        for _ in range(cfg.count):
            quad, rho, alpha = draw(rng, beta, cfg.bound)
            src = DomainSpec.annulus((1, alpha), -1, 1)
            v = decide(src, DomainSpec.annulus((1, beta), -rho, rho))
            if v.exists and v.certificate in (quad, tuple(-x for x in quad)):
                recovered += 1
                f = v.family.member(0, log_b=Fraction(1, 3)).map
                worst = max(worst, check_homogeneity(f, float(rho), float(alpha), float(beta), plan))
            rho2 = rho + cfg.shift
            rejected += decide(src, DomainSpec.annulus((1, beta), -rho2, rho2)).exists is False
        rows.append({
            "radicand": d,
            "count": cfg.count,
            "recovered": recovered,
            "shiftedRejected": rejected,
            "maxHomogeneityDeviation": worst,
            "seconds": round(time.perf_counter() - t0, 3),
        })
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radicands", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--bound", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=1000)
    args = ap.parse_args()
    cfg = SweepConfig(args.radicands, args.count, args.bound, args.seed, args.samples)
    rows = run(cfg)
    print(json.dumps({"config": {**asdict(cfg), "shift": str(cfg.shift)}, "results": rows}, indent=2))


if __name__ == "__main__":
    main()
