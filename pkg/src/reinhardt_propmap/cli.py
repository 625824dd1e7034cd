"""Command-line front end.

Problem files are JSON::

    {
      "radicand": 2,                 # field of the source (and target unless radicand2)
      "radicand2": 3,                # optional field of the target
      "source": {"alpha": ["1", "1+1√"], "lower": "positive",
                 "logLower": "-1", "logUpper": "1"},
      "target": {"tag": "IrrationalAnnulus", "gamma": "0+1√", "logRadius": "3+2√"},
      "plan": {"count": 1000, "seed": 0, "boundaryMargin": 0.001, "tolerance": 1e-9}
    }

A domain block is either a spec (``alpha``/``lower``/``logUpper``/``logLower``)
or a canonical form (``tag`` plus ``logRadius``/``gamma``/``ratio``); the
latter is the only way to write the C* product shapes.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .domains import CanonicalDomain, DomainSpec, InvalidSpec, Lower, Tag, classify
from .field import ElementSyntaxError, FieldError, QuadExt, format_element, parse
from .solver import decide
from .verify import SamplePlan, oracle_membership, verify_verdict

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_UNSUPPORTED = 2
EXIT_VERIFY_FAILED = 3
EXIT_EMPTY = 4

NO_COLOR_ENV = "REINHARDT_PROPMAP_NO_COLOR"


class ProblemError(ValueError):
    pass


Domain = DomainSpec | CanonicalDomain


@dataclass(frozen=True)
class Problem:
    radicand: int
    radicand2: int | None
    source: Domain
    target: Domain | None
    plan: SamplePlan | None


def _elem(text, d: int, where: str) -> QuadExt:
    if not isinstance(text, str):
        raise ProblemError(f"{where}: field elements must be strings in the element grammar, got {text!r}")
    try:
        return parse(text, d)
    except ElementSyntaxError as exc:
        raise ProblemError(f"{where}: {exc}") from None


def _domain(block, d: int, where: str) -> Domain:
    if not isinstance(block, dict):
        raise ProblemError(f"{where}: expected an object")
    if "radiusPowerOfE" in block:
        raise ProblemError(f"{where}: 'radiusPowerOfE' is not accepted; give radii as logarithms via "
                           f"'logLower'/'logUpper' (for r = e^x write \"x\")")
    if "tag" in block:
        known = {"tag", "logRadius", "gamma", "ratio"}
        extra = set(block) - known
        if extra:
            raise ProblemError(f"{where}: unknown keys {sorted(extra)}")
        try:
            tag = Tag(block["tag"])
        except ValueError:
            raise ProblemError(f"{where}.tag: unknown tag {block['tag']!r}") from None
        lr = _elem(block["logRadius"], d, f"{where}.logRadius") if "logRadius" in block else None
        g = _elem(block["gamma"], d, f"{where}.gamma") if "gamma" in block else None
        ratio = tuple(block["ratio"]) if "ratio" in block else None
        _check_canonical(tag, lr, g, ratio, where)
        return CanonicalDomain(tag, lr, g, ratio)
    known = {"alpha", "lower", "logUpper", "logLower"}
    extra = set(block) - known
    if extra:
        raise ProblemError(f"{where}: unknown keys {sorted(extra)}")
    for key in ("alpha", "lower", "logUpper"):
        if key not in block:
            raise ProblemError(f"{where}: missing '{key}'")
    alpha = block["alpha"]
    if not isinstance(alpha, list) or len(alpha) != 2:
        raise ProblemError(f"{where}.alpha: expected a list of two elements")
    a = tuple(_elem(x, d, f"{where}.alpha[{i}]") for i, x in enumerate(alpha))
    try:
        lower = Lower(block["lower"])
    except ValueError:
        raise ProblemError(f"{where}.lower: expected one of {[x.value for x in Lower]}") from None
    hi = _elem(block["logUpper"], d, f"{where}.logUpper")
    lo = _elem(block["logLower"], d, f"{where}.logLower") if "logLower" in block else None
    try:
        return DomainSpec(a, lower, hi, lo)
    except InvalidSpec as exc:
        raise ProblemError(f"{where}: {exc}") from None


def _check_canonical(tag: Tag, lr, g, ratio, where: str) -> None:
    needs_radius = tag.lower is Lower.POSITIVE
    needs_gamma = tag.irrational
    if needs_radius != (lr is not None):
        raise ProblemError(f"{where}: tag {tag.value} {'needs' if needs_radius else 'takes no'} logRadius")
    if needs_radius and lr.sign() <= 0:
        raise ProblemError(f"{where}.logRadius must be positive")
    if needs_gamma != (g is not None):
        raise ProblemError(f"{where}: tag {tag.value} {'needs' if needs_gamma else 'takes no'} gamma")
    if needs_gamma and g.is_rational():
        raise ProblemError(f"{where}.gamma must be irrational")
    if (tag is Tag.ELEMENTARY_RATIONAL) != (ratio is not None):
        raise ProblemError(f"{where}: ratio is required exactly for ElementaryRational")
    if ratio is not None:
        if len(ratio) != 2 or not all(isinstance(x, int) for x in ratio) or ratio[1] <= 0:
            raise ProblemError(f"{where}.ratio: expected [p, q] with q > 0")


def _plan(block, where="plan") -> SamplePlan:
    if not isinstance(block, dict):
        raise ProblemError(f"{where}: expected an object")
    keys = {"count": "count", "seed": "seed", "boundaryMargin": "boundary_margin", "tolerance": "tolerance"}
    extra = set(block) - set(keys)
    if extra:
        raise ProblemError(f"{where}: unknown keys {sorted(extra)}")
    try:
        return SamplePlan(**{keys[k]: v for k, v in block.items()})
    except (TypeError, ValueError) as exc:
        raise ProblemError(f"{where}: {exc}") from None


def _radicand(value, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ProblemError(f"{where}: expected an integer")
    try:
        QuadExt(0, 1, value) if value else None
    except FieldError as exc:
        raise ProblemError(f"{where}: {exc}") from None
    return value


def load_problem(doc: dict, need_target: bool = True) -> Problem:
    if not isinstance(doc, dict):
        raise ProblemError("problem file must be a JSON object")
    extra = set(doc) - {"radicand", "radicand2", "source", "target", "plan"}
    if extra:
        raise ProblemError(f"unknown top-level keys {sorted(extra)}")
    d = _radicand(doc.get("radicand", 0), "radicand")
    d2 = _radicand(doc["radicand2"], "radicand2") if "radicand2" in doc else None
    if "source" not in doc:
        raise ProblemError("missing 'source'")
    src = _domain(doc["source"], d, "source")
    if "target" in doc:
        dst = _domain(doc["target"], d if d2 is None else d2, "target")
    elif need_target:
        raise ProblemError("missing 'target'")
    else:
        dst = None
    plan = _plan(doc["plan"]) if "plan" in doc else None
    return Problem(d, d2, src, dst, plan)


def _domain_echo(dom: Domain) -> dict:
    return dom.to_dict()


def echo_problem(p: Problem) -> dict:
    """Canonical re-serialisation; :func:`load_problem` reads it back to an equal Problem."""
    out: dict = {"radicand": p.radicand, "source": _domain_echo(p.source)}
    if p.radicand2 is not None:
        out["radicand2"] = p.radicand2
    if p.target is not None:
        out["target"] = _domain_echo(p.target)
    if p.plan is not None:
        out["plan"] = p.plan.to_dict()
    return out


def _read_json(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _canonical_doc(c: CanonicalDomain) -> dict:
    out = c.to_dict()
    out["radicand"] = max((x.d for x in (c.log_radius, c.gamma) if x is not None), default=0)
    return out


def _classification_doc(dom: Domain) -> dict:
    if isinstance(dom, CanonicalDomain):
        return {"canonical": _canonical_doc(dom), "witness": {"E": [[1, 0], [0, 1]], "logModuli": ["0", "0"],
                                                        "phases": [0.0, 0.0]},
                "trail": ["already canonical"]}
    c = classify(dom)
    return {"canonical": _canonical_doc(c.canonical), "witness": c.witness.to_dict(), "trail": list(c.trail),
            "det": c.witness.det}


def _effective_plan(p: Problem, args) -> SamplePlan:
    base = p.plan or SamplePlan()
    return SamplePlan(
        count=args.samples if args.samples is not None else base.count,
        seed=args.seed if args.seed is not None else base.seed,
        boundary_margin=base.boundary_margin,
        tolerance=args.tol if args.tol is not None else base.tolerance,
    )


def _parse_coeff(text: str, d: int):
    parts = [s.strip() for s in text.split(",")]
    if len(parts) not in (2, 4):
        raise ProblemError("--coeff expects LOGA,LOGB or LOGA,LOGB,PHASE1,PHASE2")
    logs = tuple(_elem(x, d, f"--coeff[{i}]") for i, x in enumerate(parts[:2]))
    try:
        phases = tuple(float(x) for x in parts[2:]) or (0.0, 0.0)
    except ValueError:
        raise ProblemError("--coeff phases must be floats (radians)") from None
    return logs, phases


def _base(args, p: Problem, command: str) -> dict:
    return {"toolVersion": __version__, "command": command, "input": echo_problem(p)}


def _spec_or_none(dom: Domain) -> DomainSpec | None:
    return dom if isinstance(dom, DomainSpec) else None


def run(args) -> tuple[dict, int]:
    if args.command == "oracle":
        return _run_oracle(args)
    p = load_problem(_read_json(args.file), need_target=args.command != "classify")
    doc = _base(args, p, args.command)
    if args.command == "classify":
        doc["source"] = _classification_doc(p.source)
        if p.target is not None:
            doc["target"] = _classification_doc(p.target)
        return doc, EXIT_OK

    verdict = decide(p.source, p.target)
    vd = verdict.to_dict()
    doc.update(verdict=vd["verdict"], theorem=vd["theorem"], citation=vd["citation"],
               certificate=vd["certificate"], notes=vd["notes"])
    doc["canonical"] = {"source": _canonical_doc(verdict.source.canonical),
                        "target": _canonical_doc(verdict.target.canonical)}
    if args.command in ("enumerate", "verify"):
        doc["family"] = vd["family"]
    if verdict.exists is None:
        return doc, EXIT_UNSUPPORTED
    if args.command == "decide":
        return doc, EXIT_EMPTY if (args.expect_exists and not verdict.exists) else EXIT_OK
    if args.command == "enumerate":
        return doc, EXIT_OK

    plan = _effective_plan(p, args)
    doc["plan"] = plan.to_dict()
    if not verdict.exists:
        doc["verification"] = None
        doc["notes"] = doc["notes"] + ["verdict is empty: nothing to verify"]
        return doc, EXIT_OK
    target_d = p.radicand2 if p.radicand2 is not None else p.radicand
    coeff = _parse_coeff(args.coeff, target_d) if args.coeff else None
    try:
        reports = verify_verdict(verdict, plan, coefficients=coeff, mutation=args.mutate,
                                 src_spec=_spec_or_none(p.source), dst_spec=_spec_or_none(p.target),
                                 member=args.member)
    except ValueError as exc:
        raise ProblemError(str(exc)) from None
    if args.radial:
        for r in reports:
            if r.radial is None:
                r.notes.append("radial profile requested: not applicable (needs two irrational annuli)")
    failures = sorted({f for r in reports for f in r.failures})
    doc["verification"] = {"passed": not failures, "failedChecks": failures,
                           "instances": [r.to_dict() for r in reports]}
    return doc, EXIT_OK if not failures else EXIT_VERIFY_FAILED


def _run_oracle(args) -> tuple[dict, int]:
    x = _elem(args.x, args.radicand, "x")
    beta = _elem(args.beta, args.radicand, "beta")
    if args.bound < 1:
        raise ProblemError("bound must be at least 1")
    hits = oracle_membership(x, beta, args.bound)
    doc = {"toolVersion": __version__, "command": "oracle",
           "input": {"x": format_element(x), "beta": format_element(beta), "bound": args.bound,
                     "radicand": args.radicand},
           "solutions": [list(h) for h in hits]}
    return doc, EXIT_OK


def _color(text: str, code: str) -> str:
    if os.environ.get(NO_COLOR_ENV) or not sys.stdout.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def render_text(doc: dict) -> str:
    lines = []
    cmd = doc.get("command")
    if cmd == "oracle":
        inp = doc["input"]
        lines.append(f"x = {inp['x']}, beta = {inp['beta']} (d={inp['radicand']}), bound {inp['bound']}")
        sols = doc["solutions"]
        lines.append("solutions (k, l): " + (", ".join(f"({k}, {l})" for k, l in sols) if sols else "none"))
        return "\n".join(lines)
    if cmd == "classify":
        for side in ("source", "target"):
            if side in doc:
                c = doc[side]
                lines.append(f"{side}: {c['canonical']}")
                lines.append(f"  witness E = {c['witness']['E']}, log|c| = {c['witness']['logModuli']}")
                lines.extend(f"  - {t}" for t in c["trail"])
        return "\n".join(lines)
    v = doc["verdict"]
    colour = {"exists": "32", "empty": "33", "unsupported": "35"}[v]
    lines.append(f"verdict: {_color(v, colour)}   theorem: {doc['theorem']}")
    lines.append(f"  {doc['citation']}")
    lines.append(f"source: {doc['canonical']['source']}")
    lines.append(f"target: {doc['canonical']['target']}")
    if doc.get("certificate") is not None:
        lines.append(f"certificate: {doc['certificate']}")
    if "family" in doc:
        lines.append("family: " + json.dumps(doc["family"], ensure_ascii=False, sort_keys=True))
    lines.extend(f"note: {n}" for n in doc.get("notes", []))
    ver = doc.get("verification")
    if ver:
        status = _color("PASS", "32") if ver["passed"] else _color("FAIL", "31")
        lines.append(f"verification: {status}" + ("" if ver["passed"] else f" ({', '.join(ver['failedChecks'])})"))
        for inst in ver["instances"]:
            lines.append(f"  {inst['instance']}")
            lines.append(f"    containment {inst['containmentPassRate']:.4f}, level-set spread "
                         f"{inst['levelSetMaxDeviation']:.3e}, homogeneity {inst['homogeneityMaxDeviation']}")
            pp = inst["propernessProxy"]
            lines.append(f"    properness proxy: {pp['label']} (final {pp['finalBoundaryDistance']:.3e})")
            if inst["radialProfile"]:
                rp = inst["radialProfile"]
                lines.append(f"    radial slope {rp['slope']:.6f}, residual {rp['residual']:.2e}, "
                             f"endpoints {'ok' if rp['endpoints_ok'] else 'off'}")
            if inst["constraintDiscrimination"]:
                lines.append(f"    coefficient relation holding: {inst['constraintDiscrimination']['holding']}-form")
            if inst["failures"]:
                lines.append(f"    failed: {', '.join(inst['failures'])}")
            lines.extend(f"    note: {n}" for n in inst["notes"])
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")

    problem = argparse.ArgumentParser(add_help=False)
    problem.add_argument("file", help="problem file (JSON), or - for stdin")

    checks = argparse.ArgumentParser(add_help=False)
    checks.add_argument("--tol", type=float, default=None, help="check tolerance (default 1e-9)")
    checks.add_argument("--samples", type=int, default=None, help="sample count (default 1000)")
    checks.add_argument("--seed", type=int, default=None, help="sampling seed (default 0)")
    checks.add_argument("--coeff", default=None, help="LOGA,LOGB[,PHASE1,PHASE2] for monomial members")
    checks.add_argument("--mutate", default=None, help=argparse.SUPPRESS)
    checks.add_argument("--member", type=int, default=None, help="verify only this default member")
    checks.add_argument("--radial", action="store_true", help="request the radial profile check")

    ap = argparse.ArgumentParser(prog="reinhardt-propmap",
                                 description="Proper holomorphic maps between Reinhardt domains in C^2.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common, problem], help="canonical forms and witnesses")
    d = sub.add_parser("decide", parents=[common, problem], help="existence verdict and certificate")
    d.add_argument("--expect-exists", action="store_true", help="exit 4 when the verdict is empty")
    sub.add_parser("enumerate", parents=[common, problem], help="verdict plus full family descriptor")
    sub.add_parser("verify", parents=[common, problem, checks], help="numerical checks of default members")
    o = sub.add_parser("oracle", parents=[common], help="brute-force x = k + l*beta")
    o.add_argument("x")
    o.add_argument("beta")
    o.add_argument("bound", type=int)
    o.add_argument("--radicand", type=int, default=0)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    try:
        doc, code = run(args)
    except (ProblemError, InvalidSpec, FieldError) as exc:
        if args.format == "json":
            print(json.dumps({"toolVersion": __version__, "command": args.command, "error": str(exc)},
                             sort_keys=True, indent=2, ensure_ascii=False))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        print(render_text(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
