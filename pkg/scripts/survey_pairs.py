"""Tabulate the decision for every ordered pair of normal-form tags.

Each tag gets one representative domain (parameters below). The table
shows exists/empty/unsupported with the tag that settles it, and with
``--verify`` every positive cell is also checked numerically.
"""
import argparse
from dataclasses import dataclass

from reinhardt_propmap import CanonicalDomain, QuadExt, Tag, decide
from reinhardt_propmap.verify import SamplePlan, verify_verdict


@dataclass
class SurveyConfig:
    radicand: int = 2
    log_radius: int = 1
    samples: int = 300
    seed: int = 0
    verify: bool = False


def representatives(cfg: SurveyConfig) -> dict[Tag, CanonicalDomain]:
    s = QuadExt.sqrt(cfg.radicand)
    R = QuadExt(cfg.log_radius)
    return {
        Tag.ANNULUS_TIMES_C: CanonicalDomain(Tag.ANNULUS_TIMES_C, R),
        Tag.ANNULUS_TIMES_CSTAR: CanonicalDomain(Tag.ANNULUS_TIMES_CSTAR, R),
        Tag.IRRATIONAL_ANNULUS: CanonicalDomain(Tag.IRRATIONAL_ANNULUS, R, gamma=s),
        Tag.PUNCTURED_DISC_TIMES_C: CanonicalDomain(Tag.PUNCTURED_DISC_TIMES_C),
        Tag.PUNCTURED_DISC_TIMES_CSTAR: CanonicalDomain(Tag.PUNCTURED_DISC_TIMES_CSTAR),
        Tag.IRRATIONAL_PUNCTURED: CanonicalDomain(Tag.IRRATIONAL_PUNCTURED, gamma=s),
        Tag.DISC_TIMES_C: CanonicalDomain(Tag.DISC_TIMES_C),
        Tag.ELEMENTARY_IRRATIONAL: CanonicalDomain(Tag.ELEMENTARY_IRRATIONAL, gamma=s),
        Tag.ELEMENTARY_RATIONAL: CanonicalDomain(Tag.ELEMENTARY_RATIONAL, ratio=(1, 2)),
    }


def cell(v, cfg: SurveyConfig) -> str:
    text = f"{v.status}:{v.theorem}"
    if cfg.verify and v.exists is True:
        plan = SamplePlan(count=cfg.samples, seed=cfg.seed)
        ok = all(r.passed for r in verify_verdict(v, plan))
        text += "+" if ok else "!"
    return text


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radicand", type=int, default=2)
    ap.add_argument("--log-radius", type=int, default=1)
    ap.add_argument("--verify", action="store_true", help="numerically check positive cells")
    ap.add_argument("--samples", type=int, default=300)
    args = ap.parse_args()
    cfg = SurveyConfig(args.radicand, args.log_radius, args.samples, verify=args.verify)

    reps = representatives(cfg)
    names = [t.value for t in reps]
    width = max(map(len, names)) + 2
    print(" " * width + "".join(n[:16].ljust(18) for n in names))
    for t1, a in reps.items():
        row = [cell(decide(a, b), cfg) for b in reps.values()]
        print(t1.value.ljust(width) + "".join(c.ljust(18) for c in row))


if __name__ == "__main__":
    main()
