"""Command line interface.

Exit codes: 0 success, 1 a requested check or expected verdict failed,
2 bad input (unknown name, malformed file, invalid parameters).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence

from . import __version__
from .algebra import AlgebraLaw, Subspace, ideal_of_squares, is_lie, quotient_law
from .bimodules import Bimodule, adjoint_bimodule, trivial_bimodule
from .cache import ResultCache
from .cohomology import STRATEGIES, ce_sequence, cohomology, pair_sequence
from .complexes import CEComplex, LodayComplex, PairRelComplex, PirashviliRelComplex, SubRelComplex
from .constructors import catalog, catalog_names
from .deformation import (OUTSIDE, RIGID, UNCERTIFIED, quotient_equality_report, rigidity_report,
                          semisimple_leibniz_report, stability_evidence)
from .errors import HypothesisFailed, LeibcohError
from .io import dumps_law, law_to_dict, load_law, load_module, module_to_dict
from .linalg import PRIMES

THEORIES = ("leibniz", "ce", "pair-rel", "pirashvili-rel", "sub-rel")


class InputError(Exception):
    pass


# -- helpers -------------------------------------------------------------------

def _header(strategy: str) -> dict[str, Any]:
    return {"tool": "leibcoh", "version": __version__, "strategy": strategy, "primes": list(PRIMES)}


def _resolve_law(spec: str) -> AlgebraLaw:
    if os.path.exists(spec):
        return load_law(spec)
    return catalog(spec)


def _coefficients(coeff: str, law: AlgebraLaw) -> Bimodule:
    if coeff == "adjoint":
        return adjoint_bimodule(law)
    if coeff == "trivial":
        return trivial_bimodule(law)
    M = load_module(coeff)
    if M.algebra != law:
        raise InputError(f"module in {coeff} is not over the given algebra")
    return Bimodule(law, M.dim_m, M.left, M.right, M.name)


def _parse_sub(spec: str | None, dim: int) -> Subspace:
    if not spec:
        raise InputError("sub-rel needs --sub (basis indices or a vector file)")
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            vecs = json.load(fh)
        from .io import parse_rational
        return Subspace(dim, [[parse_rational(c) for c in v] for v in vecs])
    try:
        idx = [int(a) for a in spec.split(",") if a.strip()]
    except ValueError as exc:
        raise InputError(f"bad --sub {spec!r}") from exc
    if any(not 0 <= i < dim for i in idx):
        raise InputError("--sub index out of range")
    return Subspace.coordinate(dim, idx)


def _parse_expect(spec: str | None) -> dict[int, int]:
    if not spec:
        return {}
    out = {}
    for part in spec.split(","):
        key, _, val = part.strip().partition("=")
        if not key.upper().startswith("H") or not val:
            raise InputError(f"bad --expect item {part!r}; use H<n>=<dim>")
        try:
            out[int(key[1:])] = int(val)
        except ValueError as exc:
            raise InputError(f"bad --expect item {part!r}") from exc
    return out


def lie_quotient(h: AlgebraLaw) -> tuple[list[list], AlgebraLaw]:
    """Projection matrix ``h -> h / ideal of squares`` and the quotient law."""
    I = ideal_of_squares(h)
    b = quotient_law(h, I)
    comp = I.complement_indices()
    f = [[0] * h.dim for _ in comp]
    for i in range(h.dim):
        red = I.reduce({i: 1})
        for a, c in enumerate(comp):
            f[a][i] = red[c]
    return f, b


def _emit(report: dict, text: str, json_path: str | None) -> None:
    blob = json.dumps(report, indent=1, sort_keys=True, ensure_ascii=False) + "\n"
    if json_path == "-":
        sys.stdout.write(blob)
        return
    sys.stdout.write(text + "\n")
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(blob)


def _cached(args, inputs: dict, op: str, compute):
    cache = ResultCache(getattr(args, "cache_dir", None))
    payload, _ = cache.get_or_compute(inputs, op, args.rank_strategy, compute)
    return payload


# -- build ---------------------------------------------------------------------

def _build_law(args) -> AlgebraLaw:
    name = args.name
    if name in ("richardson", "richardson_leibniz"):
        if args.k is None or args.l is None:
            raise InputError("richardson needs --k and --l")
        return catalog(f"richardson_leibniz({args.k},{args.l})")
    if name == "richardson_lie":
        if args.k is None:
            raise InputError("richardson_lie needs --k")
        return catalog(f"richardson_lie({args.k})")
    if name == "abelian":
        if args.n is None:
            raise InputError("abelian needs --n")
        return catalog(f"abelian({args.n})")
    return catalog(name)


def cmd_build(args) -> int:
    law = _build_law(args)
    text = dumps_law(law)
    if args.output:
        from .io import save_law
        save_law(law, args.output)
        print(f"wrote {args.output}: dim {law.dim}, {law.nonzero_count()} nonzero structure constants")
    else:
        sys.stdout.write(text)
    return 0


# -- cohomology ----------------------------------------------------------------

def _complex(args, law: AlgebraLaw):
    theory = args.theory
    if theory == "pair-rel":
        f, b = lie_quotient(law)
        return PairRelComplex(f, law, b, _coefficients(args.coeff, b))
    M = _coefficients(args.coeff, law)
    if theory == "leibniz":
        return LodayComplex(law, M)
    if theory == "ce":
        return CEComplex(law, M)
    if theory == "pirashvili-rel":
        return PirashviliRelComplex(law, M)
    s = _parse_sub(args.sub, law.dim)
    return SubRelComplex(law, s, M if args.coeff != "adjoint" else "adjoint")


def _cohomology_table(rep: dict) -> str:
    lines = [f"theory {rep['theory']}  coefficients {rep['coeff']}  strategy {rep['strategy']}",
             f"{'deg':>4} {'dim':>6} {'cochains':>9} {'rank d':>7} {'method':>10}"]
    for r in rep["degrees"]:
        flag = "" if r["certified"] else " (upper bound)"
        lines.append(f"{r['label']:>4} {r['dim']:>6} {r['cochains']:>9} {r['rank_d']:>7} {r['method']:>10}{flag}")
    return "\n".join(lines)


def cmd_cohomology(args) -> int:
    law = load_law(args.law)
    expect = _parse_expect(args.expect)
    top = args.max_degree if args.max_degree is not None else (max(expect) if expect else 3)
    if top < 0:
        raise InputError("--max-degree must be non-negative")
    C = _complex(args, law)
    labels = list(range(0, top + 1))
    coeff_in = args.coeff if args.coeff in ("adjoint", "trivial") else module_to_dict(load_module(args.coeff))
    inputs = {"law": law_to_dict(law), "theory": args.theory, "coeff": coeff_in, "sub": args.sub, "labels": labels}

    def compute():
        res = cohomology(C, [n + C.label_shift for n in labels], args.rank_strategy)
        return {"degrees": [r.as_dict() for r in res.degrees.values()], "certified": res.certified}

    payload = _cached(args, inputs, "cohomology", compute)
    report = dict(_header(args.rank_strategy), theory=args.theory,
                  coeff=args.coeff if args.coeff in ("adjoint", "trivial") else "file", **payload)
    dims = {r["label"]: r["dim"] for r in payload["degrees"]}
    failures = []
    for n, want in sorted(expect.items()):
        got = dims.get(n)
        if got != want:
            failures.append(f"H{n}: expected {want}, got {got}")
    report["expect"] = {f"H{n}": v for n, v in sorted(expect.items())}
    report["expect_failures"] = failures
    text = _cohomology_table(report)
    if failures:
        text += "\n" + "\n".join(f"FAIL {f}" for f in failures)
    elif expect:
        text += "\nexpectations met"
    _emit(report, text, args.json)
    return 1 if failures else 0


# -- report --------------------------------------------------------------------

def _need_kl(args) -> tuple[int, int]:
    if args.k is None or args.l is None:
        raise InputError("this report needs --k and --l")
    if args.k < 1 or args.l < 1:
        raise InputError("--k and --l must be positive")
    return args.k, args.l


def _report_rigidity(args):
    k, l = _need_kl(args)
    payload = _cached(args, {"k": k, "l": l}, "rigidity",
                      lambda: rigidity_report(k, l, args.rank_strategy).as_dict())
    lines = [f"richardson({k},{l})"]
    for c in payload["hypotheses"]:
        lines.append(f"  [{'ok' if c['passed'] else 'no'}] {c['name']} {c['detail']}".rstrip())
    for key in ("H2(ghat,ghat)", "HL2(h,h)", "HL2(ghat,ghat)", "E2(h;s,h)", "certified"):
        lines.append(f"  {key:<16} {payload[key]}")
    lines.append(f"verdict: {payload['verdict']}")
    ok = payload["verdict"] in (RIGID, OUTSIDE, UNCERTIFIED)
    return payload, "\n".join(lines), ok


def _report_equality(args):
    k, l = _need_kl(args)
    payload = _cached(args, {"k": k, "l": l}, "equality",
                      lambda: quotient_equality_report(k, l, args.rank_strategy))
    keys = ("HL2(h,h)", "H2(ghat,ghat)", "HL2(ghat,ghat)", "certified", "direct_factor_ok", "equal")
    lines = [f"richardson({k},{l})"] + [f"  {key:<18} {payload[key]}" for key in keys]
    ok = payload["equal"] and payload["direct_factor_ok"]
    lines.append("verdict: " + ("HL2(h,h) = HL2(ghat,ghat)" if ok else "equality not reproduced"))
    return payload, "\n".join(lines), ok


def _report_stability(args):
    if args.law is None and args.k is not None and args.l is not None:
        law = catalog(f"richardson_leibniz({args.k},{args.l})")
    elif args.law is not None:
        law = _resolve_law(args.law)
    else:
        raise InputError("stability needs --law or --k/--l")
    sub = args.sub or "0,1,2"
    s = _parse_sub(sub, law.dim)
    payload = _cached(args, {"law": law_to_dict(law), "sub": sub}, "stability",
                      lambda: stability_evidence(law, s, strategy=args.rank_strategy).as_dict())
    payload = dict(payload, E={str(a): b for a, b in payload["E"].items()})
    lines = [f"E^n(h; s, h): " + ", ".join(f"E{n}={d}" for n, d in sorted(payload["E"].items()))]
    for c in payload["checklist"]:
        mark = {True: "ok", False: "no", None: "--"}[c["passed"]]
        lines.append(f"  [{mark}] {c['name']} {c['detail']}".rstrip())
    lines.append(f"verdict: {payload['verdict']}")
    return payload, "\n".join(lines), payload["verdict"] == "stable-certified"


def _report_long_exact(args):
    law = _resolve_law(args.law or "heisenberg3")
    top = args.max_degree if args.max_degree is not None else 2
    degrees = list(range(0, top + 1))
    coeff = args.coeff

    def compute():
        if is_lie(law):
            M = _coefficients(coeff, law)
            rep, which = ce_sequence(law, M, degrees), "ce"
        else:
            f, b = lie_quotient(law)
            rep, which = pair_sequence(f, law, b, _coefficients(coeff, b), degrees), "pair"
        return {"sequence": which, "names": rep.names, "dims": rep.dims, "ranks": rep.ranks,
                "exact_at": rep.exact_at, "exact": rep.exact}

    coeff_in = coeff if coeff in ("adjoint", "trivial") else module_to_dict(load_module(coeff))
    payload = _cached(args, {"law": law_to_dict(law), "coeff": coeff_in, "degrees": degrees}, "long-exact", compute)
    w = max(len(n) for n in payload["names"])
    lines = [f"{payload['sequence']} sequence"]
    for name, d in zip(payload["names"], payload["dims"]):
        lines.append(f"  {name:<{w}} {d:>5}")
    lines.append(f"slots checked {len(payload['exact_at'])}, exact {sum(payload['exact_at'])}")
    lines.append("verdict: " + ("all slots exact" if payload["exact"] else "not exact"))
    return payload, "\n".join(lines), payload["exact"]


def _report_semisimple(args):
    law = _resolve_law(args.law) if args.law else None
    if law is None:
        raise InputError("semisimple needs --law")

    def compute():
        try:
            return semisimple_leibniz_report(law, args.rank_strategy)
        except HypothesisFailed as exc:
            return {"hypothesis_failed": str(exc), "vanishes": None}

    payload = _cached(args, {"law": law_to_dict(law)}, "semisimple", compute)
    if payload.get("hypothesis_failed"):
        return payload, f"hypothesis fails: {payload['hypothesis_failed']}", True
    lines = [f"  HL1 {payload['HL1']}", f"  HL2 {payload['HL2']}",
             "verdict: " + ("HL1 = HL2 = 0" if payload["vanishes"] else "vanishing not reproduced")]
    return payload, "\n".join(lines), payload["vanishes"]


REPORTS = {"rigidity": _report_rigidity, "stability": _report_stability, "equality": _report_equality,
           "long-exact": _report_long_exact, "semisimple": _report_semisimple}


def cmd_report(args) -> int:
    payload, text, ok = REPORTS[args.kind](args)
    report = dict(_header(args.rank_strategy), report=args.kind, result=payload, ok=bool(ok))
    _emit(report, text, args.json)
    return 0 if ok else 1


# -- entry point ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="leibcoh", description="Exact Leibniz and Lie algebra cohomology.")
    p.add_argument("--version", action="version", version=f"leibcoh {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="write a catalog algebra as a JSON law file")
    b.add_argument("name", help="one of: richardson, richardson_lie, abelian, " + ", ".join(catalog_names()))
    b.add_argument("--k", type=int)
    b.add_argument("--l", type=int)
    b.add_argument("--n", type=int)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_build)

    def common(q):
        q.add_argument("--rank-strategy", choices=STRATEGIES, default="auto")
        q.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout only)")
        q.add_argument("--cache-dir", help="result cache directory (default: $LEIBCOH_CACHE_DIR)")

    c = sub.add_parser("cohomology", help="cohomology dimensions of a law file")
    c.add_argument("law")
    c.add_argument("--theory", choices=THEORIES, default="leibniz")
    c.add_argument("--coeff", default="adjoint", help="adjoint, trivial or a module file")
    c.add_argument("--max-degree", type=int)
    c.add_argument("--sub", help="subalgebra for sub-rel: comma-separated basis indices or a JSON vector file")
    c.add_argument("--expect", help="e.g. H1=0,H2=1")
    common(c)
    c.set_defaults(func=cmd_cohomology)

    r = sub.add_parser("report", help="structured verdicts")
    r.add_argument("kind", choices=sorted(REPORTS))
    r.add_argument("--k", type=int)
    r.add_argument("--l", type=int)
    r.add_argument("--law", help="catalog name or law file")
    r.add_argument("--coeff", default="adjoint")
    r.add_argument("--sub")
    r.add_argument("--max-degree", type=int)
    common(r)
    r.set_defaults(func=cmd_report)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, LeibcohError, OSError, ValueError, IndexError, json.JSONDecodeError) as exc:
        print(f"leibcoh: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
