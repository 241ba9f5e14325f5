"""Command-line front end.

    rootfans fan-stats D 3
    rootfans poincare B 6 --check-all
    rootfans classify B 1 --data u1=0:1
    rootfans classify C 2 --orbit 'ray:1/2(v1+v2)'
    rootfans oracle B 1 5 --data u1=0:1

Exit codes: 0 success, 1 a check failed (or data were invalid), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Mapping, Sequence

from .fan import (Cone, SimplicialFan, check_fiber_flatness, format_vector,
                  parse_vector, weyl_chamber_fan)
from .homology import (IntPolynomial, descent_polynomial, poincare_closed_form,
                       poincare_from_fan, poincare_series)
from .moduli import (CombinatorialType, InconsistentData, RnData, chain_point_count,
                     classify, enumerate_fiber_points, fit_quadratic, format_type,
                     is_prime, orbit_data, orbit_type, validate_data)
from .rootsys import Lattice, check_family_rank, lattice

POINCARE_BOUND = 7
FAN_STATS_BOUND = 6
FLATNESS_BOUND = 4
ORACLE_PRIMES = (3, 5, 7)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# JSON forms

def polynomial_to_json(p: IntPolynomial) -> list[int]:
    return list(p.coeffs)


def polynomial_from_json(obj: Sequence[int]) -> IntPolynomial:
    return IntPolynomial(obj)


def type_to_json(t: CombinatorialType) -> dict:
    return t.to_json()


def type_from_json(obj: Mapping) -> CombinatorialType:
    return CombinatorialType.from_json(obj)


def fan_to_json(fan: SimplicialFan) -> dict:
    return {"lattice": fan.lattice.tag, "rays": [list(r) for r in fan.rays],
            "maximal_cones": [list(c) for c in fan.maximal_index_tuples()]}


def fan_from_json(obj: Mapping) -> SimplicialFan:
    lat = parse_lattice_tag(obj["lattice"])
    return SimplicialFan(lat, [tuple(r) for r in obj["rays"]], obj["maximal_cones"])


def parse_lattice_tag(tag: str) -> Lattice:
    import re
    m = re.fullmatch(r"([MN])\(([BCD])(\d+)\)", tag)
    if not m:
        raise ValueError(f"bad lattice tag {tag!r}")
    return lattice(m.group(1), m.group(2), int(m.group(3)))


def cone_to_json(c: Cone) -> dict:
    return {"lattice": c.lattice.tag, "rays": [list(r) for r in c.rays]}


# ---------------------------------------------------------------------------
# reports

class Report:
    def __init__(self, command: str, inputs: dict):
        self.command = command
        self.inputs = inputs
        self.outputs: dict[str, Any] = {}
        self.checks: dict[str, bool] = {}
        self.lines: list[str] = []
        self._start = time.perf_counter()

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "outputs": self.outputs,
                "checks": self.checks, "ok": self.ok,
                "timing_s": round(time.perf_counter() - self._start, 6)}

    def emit(self, as_json: bool, out=None) -> None:
        out = out or sys.stdout
        if as_json:
            json.dump(self.to_json(), out, indent=2, sort_keys=True)
            out.write("\n")
        else:
            for line in self.lines:
                out.write(line + "\n")


def _family_rank(family: str, n: int) -> str:
    try:
        fam = check_family_rank(family, n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if fam == "A":
        raise UsageError("family A is only supported for diagrams; use B, C or D")
    return fam


def _parse_data(items: Sequence[str] | None, family: str, n: int, q: int | None) -> RnData:
    assignments = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"--data entries look like root=a:b, got {item!r}")
        k, v = item.split("=", 1)
        assignments[k.strip()] = v.strip()
    try:
        return RnData.from_assignments(family, n, assignments, q)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _parse_orbit(spec: str, family: str, n: int) -> Cone:
    kind, _, body = spec.partition(":")
    if kind not in ("ray", "cone") or not body:
        raise UsageError("--orbit takes 'ray:<vector>' or 'cone:<v>;<v>;...'")
    try:
        vecs = [parse_vector(s, n) for s in body.split(";")] if kind == "cone" \
            else [parse_vector(body, n)]
    except ValueError as e:
        raise UsageError(str(e)) from None
    if kind == "ray" and len(vecs) != 1:
        raise UsageError("a ray is a single vector")
    cone = Cone(tuple(vecs), lattice("N", family, n))
    if cone not in weyl_chamber_fan(family, n):
        raise UsageError(f"{cone} is not a cone of Sigma({family}{n}) "
                         "(generators must be the primitive ray vectors)")
    return cone


# ---------------------------------------------------------------------------
# commands

def cmd_fan_stats(args) -> Report:
    fam = _family_rank(args.family, args.n)
    if args.n > FAN_STATS_BOUND:
        raise UsageError(f"fan-stats supports n <= {FAN_STATS_BOUND}")
    rep = Report("fan-stats", {"family": fam, "n": args.n})
    fan = weyl_chamber_fan(fam, args.n)
    f = fan.f_vector()
    smooth, complete = fan.is_smooth(), fan.is_complete()
    rep.outputs.update(rays=f[1], d_m=f, maximal=f[-1], smooth=smooth, complete=complete,
                       lattice=fan.lattice.tag)
    rep.checks.update(smooth=smooth, complete=complete)
    rep.lines += [f"fan Sigma({fam}{args.n}) in {fan.lattice.tag}",
                  f"rays={f[1]}", f"maximal={f[-1]}",
                  "d_m=" + ",".join(map(str, f)),
                  f"smooth={str(smooth).lower()}", f"complete={str(complete).lower()}"]
    if args.n <= FLATNESS_BOUND or args.flatness:
        report = check_fiber_flatness(fam, args.n)
        wit = [{"ray": list(r), "image_cone": cone_to_json(c)} for r, c in report.witnesses]
        rep.outputs["flatness"] = {"status": report.status, "witnesses": wit}
        rep.lines.append(f"flatness Sigma({fam}{args.n + 1}) -> Sigma({fam}{args.n}): "
                         f"{report.status}, witnesses={len(report.witnesses)}")
        for r, c in report.witnesses:
            rep.lines.append(f"  {format_vector(r)} -> interior of {c}")
    else:
        rep.outputs["flatness"] = {"status": "skipped"}
        rep.lines.append("flatness: skipped (pass --flatness to force)")
    if args.cones:
        rep.outputs["fan"] = fan_to_json(fan)
    return rep


def cmd_poincare(args) -> Report:
    fam = _family_rank(args.family, args.n)
    if args.n > args.max_n:
        raise UsageError(f"n={args.n} exceeds the bound {args.max_n} (raise --max-n)")
    rep = Report("poincare", {"family": fam, "n": args.n, "check_all": args.check_all})
    n = args.n
    if fam in "BC":
        # Sigma(C_n) and Sigma(B_n) have the same cones
        p = poincare_series(n)[n]
    else:
        p = poincare_from_fan(weyl_chamber_fan(fam, n))
    rep.outputs["polynomial"] = str(p)
    rep.outputs["coefficients"] = polynomial_to_json(p)
    rep.lines.append(str(p))
    if args.check_all:
        fan = weyl_chamber_fan(fam, n)
        routes = {"fan": poincare_from_fan(fan)}
        if fam in "BC":
            routes["closed_form"] = poincare_closed_form(n)
            routes["series"] = p
            if n <= 6:
                routes["descents"] = descent_polynomial(n)
        agree = all(r == p for r in routes.values())
        chi = p(1)
        maximal = fan.count_d_m(n)
        palin = p.is_palindromic(n)
        rep.outputs.update(routes={k: str(v) for k, v in routes.items()}, chi=chi,
                           maximal_cones=maximal, palindromic=palin)
        rep.checks.update(agreement=agree, chi_matches_maximal_cones=chi == maximal,
                          palindromic=palin)
        rep.lines += [f"routes: {', '.join(routes)}", f"agreement={str(agree).lower()}",
                      f"chi={chi}", f"palindromic={str(palin).lower()}"]
    return rep


def cmd_classify(args) -> Report:
    fam = _family_rank(args.family, args.n)
    if args.data and args.orbit:
        raise UsageError("give either --data or --orbit")
    rep = Report("classify", {"family": fam, "n": args.n, "data": args.data or [],
                              "orbit": args.orbit, "model": args.model})
    if args.orbit:
        cone = _parse_orbit(args.orbit, fam, args.n)
        combinatorial = orbit_type(fam, args.n, cone, args.model)
        rep.outputs["cone"] = cone_to_json(cone)
        d = orbit_data(fam, args.n, cone)
        if not (fam == "C" and args.model == "coarse"):
            from_data = classify(d)
            rep.checks["orbit_matches_data"] = from_data == combinatorial
        rep.outputs.update(valid=True, type=format_type(combinatorial),
                           type_json=type_to_json(combinatorial))
        rep.lines += ["valid=true", format_type(combinatorial)]
        return rep
    if args.model == "coarse":
        raise UsageError("--model coarse applies to --orbit only")
    d = _parse_data(args.data, fam, args.n, None)
    res = validate_data(d)
    rep.outputs["valid"] = res.valid
    rep.checks["valid"] = res.valid
    if not res.valid:
        triples = ["(" + ",".join(r.name for r in t) + ")" for t in res.violated]
        rep.outputs["violated"] = triples
        rep.lines += ["valid=false"] + [f"violated {t}" for t in triples]
        return rep
    try:
        t = classify(d)
    except InconsistentData as e:
        rep.checks["classified"] = False
        rep.outputs["error"] = str(e)
        rep.lines += ["valid=true", f"error: {e}"]
        return rep
    rep.outputs.update(type=format_type(t), type_json=type_to_json(t))
    rep.lines += ["valid=true", format_type(t)]
    return rep


def cmd_oracle(args) -> Report:
    fam = _family_rank(args.family, args.n)
    if args.n > 2:
        raise UsageError("the oracle enumerates fibres for n <= 2 only")
    if not is_prime(args.q) or args.q > 13:
        raise UsageError("q must be a prime <= 13")
    if args.data and args.orbit:
        raise UsageError("give either --data or --orbit")
    cone = _parse_orbit(args.orbit, fam, args.n) if args.orbit else None
    contracted = fam == "C"

    def data_at(q):
        return orbit_data(fam, args.n, cone, q) if cone else _parse_data(args.data, fam, args.n, q)

    rep = Report("oracle", {"family": fam, "n": args.n, "q": args.q,
                            "data": args.data or [], "orbit": args.orbit})
    d = data_at(args.q)
    res = validate_data(d)
    if not res.valid:
        rep.checks["valid"] = False
        rep.outputs["violated"] = ["(" + ",".join(r.name for r in t) + ")" for t in res.violated]
        rep.lines.append("invalid data; FAIL")
        return rep
    t = classify(d)
    fc = enumerate_fiber_points(fam, args.n, d, args.q, contracted)
    rep.outputs.update(type=format_type(t), count=fc.count, profile=fc.profile)
    if "2dim" in t.flags:
        counts = {q: enumerate_fiber_points(fam, args.n, data_at(q), q, contracted).count
                  for q in ORACLE_PRIMES}
        a, b, c = fit_quadratic(sorted(counts.items()))
        quad = a >= 1 and all(x.denominator == 1 for x in (a, b, c))
        rep.outputs.update(counts={str(k): v for k, v in counts.items()},
                           fit=[str(a), str(b), str(c)], quadratic_growth=quad)
        rep.checks["quadratic_growth"] = quad
        rep.lines += [f"type={format_type(t)}",
                      "counts " + ", ".join(f"q={k}: {v}" for k, v in counts.items()),
                      f"fit {a}q^2+{b}q+{c}", f"quadratic_growth={str(quad).lower()}",
                      "PASS" if quad else "FAIL"]
        return rep
    predicted = chain_point_count(t.length, args.q)
    ok = predicted == fc.count
    rep.outputs.update(predicted_length=t.length, predicted_count=predicted)
    rep.checks["count_matches"] = ok
    rep.lines += [f"type={format_type(t)}", f"count={fc.count}",
                  f"predicted l={t.length} ({predicted} points)", "PASS" if ok else "FAIL"]
    return rep


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rootfans", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("family", type=str.upper, help="B, C or D")
        sp.add_argument("n", type=int, help="rank")
        sp.add_argument("--json", action="store_true", help="emit a JSON report")

    sp = sub.add_parser("fan-stats", help="ray and cone counts, smoothness, flatness")
    common(sp)
    sp.add_argument("--flatness", action="store_true",
                    help=f"run the flatness check even for n > {FLATNESS_BOUND}")
    sp.add_argument("--cones", action="store_true", help="include rays and maximal cones in JSON")
    sp.set_defaults(func=cmd_fan_stats)

    sp = sub.add_parser("poincare", help="Poincare polynomial of X(R)")
    common(sp)
    sp.add_argument("--check-all", action="store_true", help="compare all computation routes")
    sp.add_argument("--max-n", type=int, default=POINCARE_BOUND, help="rank bound")
    sp.set_defaults(func=cmd_poincare)

    sp = sub.add_parser("classify", help="validate data and print the combinatorial type")
    common(sp)
    sp.add_argument("--data", nargs="+", metavar="ROOT=A:B",
                    help="data entries such as u1=0:1, b12=2:1, g12=1:0, 2u1=0:1")
    sp.add_argument("--orbit", metavar="SPEC", help="'ray:1/2(v1+v2)' or 'cone:v1;v1+v2'")
    sp.add_argument("--model", choices=("fine", "coarse"), default="fine",
                    help="C only: universal C_n-curve (fine) or X(C_{n+1}) fibre (coarse)")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("oracle", help="count fibre points over F_q and compare")
    common(sp)
    sp.add_argument("q", type=int, help="prime <= 13")
    sp.add_argument("--data", nargs="+", metavar="ROOT=A:B")
    sp.add_argument("--orbit", metavar="SPEC")
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        rep = args.func(args)
    except UsageError as e:
        sys.stderr.write(f"rootfans: usage error: {e}\n")
        return 2
    rep.emit(args.json)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
