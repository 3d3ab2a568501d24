"""Command-line interface.

Exit codes: 0 success, 2 malformed input or bad parameters, 3 ambient
dimension mismatch, 4 disagreement between two independent computations.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Sequence

from . import __version__
from .arrangements import (Arrangement, Graph, Multinet, MultinetSpanMismatch,
                           arrangement_problem, chen_ranks_formula, graphic_arrangement,
                           graphic_components, l2_flats, local_components, multinet_component,
                           multinet_equations_space, multinet_validate)
from .errors import (AmbientMismatch, InvalidMultinet, MalformedInput, PreconditionViolated,
                     RouteDisagreement)
from .exactalg import DEFAULT_PRIME, Field
from .experiments import kronecker_witness_details, sweep, sweep_to_jsonl
from .koszul import (KoszulProblem, NotStabilized, base_locus_length, hilbert_function,
                     resonance_trivial)
from .resonance import ResonanceComponent, component_report, in_resonance

EXIT_OK, EXIT_MALFORMED, EXIT_AMBIENT, EXIT_DISAGREE = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits with 2 as well; keep the message
        self.print_usage(sys.stderr)
        raise SystemExit(f"{self.prog}: error: {message}") from None


def parse_q_range(text: str) -> range:
    """``a..b`` (inclusive) or a single ``a``."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise MalformedInput(f"bad q range {text!r}; expected a..b") from exc
    if lo < 0 or hi < lo:
        raise MalformedInput(f"empty or negative q range {text!r}")
    return range(lo, hi + 1)


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise MalformedInput(f"bad integer list {text!r}") from exc


def _field(args: argparse.Namespace, default: Field | None = None) -> Field | None:
    return Field.parse(args.field) if args.field else default


def _emit(args: argparse.Namespace, doc: dict, tsv_lines: Sequence[str]) -> None:
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        for line in tsv_lines:
            print(line)


def _flag(x: bool | None) -> str:
    return "unknown" if x is None else str(x).lower()


# subcommands ---------------------------------------------------------------

def cmd_wq(args: argparse.Namespace) -> int:
    problem = KoszulProblem.load(args.problem, _field(args))
    qs = parse_q_range(args.q) if args.q else range(0, max(problem.n - 2, 1))
    table = hilbert_function(problem, qs[-1], q_min=qs[0], method=args.method,
                             verify=args.verify)
    doc = {"n": problem.n, "m": problem.m, "field": problem.field.tag,
           "method": table.method, "verified": table.verified,
           "values": {str(q): table[q] for q in qs}}
    _emit(args, doc, [f"{q}\t{table[q]}" for q in qs])
    return EXIT_OK


def cmd_hilbert(args: argparse.Namespace) -> int:
    problem = KoszulProblem.load(args.problem, _field(args))
    n = problem.n
    qs = parse_q_range(args.q) if args.q else range(0, max(n, 1))
    table = hilbert_function(problem, qs[-1], q_min=qs[0], method=args.method,
                             verify=args.verify)
    doc = {"n": n, "m": problem.m, "field": problem.field.tag, "method": table.method,
           "verified": table.verified, "values": {str(q): table[q] for q in qs}}
    lines = [f"{q}\t{table[q]}" for q in qs]
    if n >= 3:
        triv = resonance_trivial(problem)
        ell = base_locus_length(problem)
        ell_text = "not-stabilized" if isinstance(ell, NotStabilized) else str(ell)
        doc["resonance_trivial"] = triv
        doc["base_locus_length"] = None if isinstance(ell, NotStabilized) else ell
        lines += [f"# resonance_trivial\t{str(triv).lower()}", f"# base_locus_length\t{ell_text}"]
    _emit(args, doc, lines)
    return EXIT_OK


def _arrangement_report(args: argparse.Namespace, arr: Arrangement, components: list,
                        nets: list[dict], extra_lines: list[str]) -> int:
    field = _field(args, Field.GF())
    flats = l2_flats(arr)
    problem = arrangement_problem(arr, field)
    qs = parse_q_range(args.q) if args.q else range(max(arr.n - 1, 2), arr.n + 2)
    if qs[0] < 2:
        raise MalformedInput("Chen ranks start at q = 2")
    comp_docs = [component_report(c, problem) for c in components]
    table = hilbert_function(problem, qs[-1] - 2, q_min=qs[0] - 2, verify=args.verify)
    chen = []
    for q in qs:
        formula = chen_ranks_formula(components, q)
        koszul = table[q - 2]
        chen.append({"q": q, "formula": formula, "koszul": koszul, "agree": formula == koszul})
    verdict = "AGREE" if all(c["agree"] for c in chen) else "DISAGREE"
    doc = {"hyperplanes": arr.n, "ambient_dim": arr.ambient_dim, "field": field.tag,
           "flats": [list(x.members) for x in flats if x.size >= 3],
           "flat_labels": [[arr.label(h) for h in x.members] for x in flats if x.size >= 3],
           "double_points": sum(1 for x in flats if x.size == 2),
           "dim_K": problem.m, "dim_Kperp": problem.Kperp.dim,
           "multinets": nets, "components": comp_docs, "chen": chen, "verdict": verdict}
    lines = [f"hyperplanes\t{arr.n}", f"field\t{field.tag}"]
    lines += [f"flat\t{','.join(arr.label(h) for h in x.members)}" for x in flats if x.size >= 3]
    lines += [f"double_points\t{doc['double_points']}", f"dim_K\t{problem.m}",
              f"dim_Kperp\t{problem.Kperp.dim}"]
    lines += extra_lines
    for c in comp_docs:
        lines.append("component\t{label}\tdim={dim}\tisotropic={i}\tseparable={s}\t"
                     "separable_pM={p}\tstrongly_isotropic={si}".format(
                         label=c["label"], dim=c["dim"], i=_flag(c["isotropic"]),
                         s=_flag(c["separable"]), p=_flag(c["separable_pM"]),
                         si=_flag(c["strongly_isotropic"])))
    for c in chen:
        lines.append(f"chen\t{c['q']}\tformula={c['formula']}\tkoszul={c['koszul']}\t"
                     f"{'AGREE' if c['agree'] else 'DISAGREE'}")
    lines.append(f"verdict\t{verdict}")
    _emit(args, doc, lines)
    return EXIT_OK if verdict == "AGREE" else EXIT_DISAGREE


def cmd_arrangement(args: argparse.Namespace) -> int:
    field = _field(args, Field.GF())
    arr = Arrangement.load(args.arrangement)
    components = local_components(arr, field)
    nets, lines = [], []
    for path in args.multinet or []:
        net = Multinet.load(path)
        report = multinet_validate(arr, net)
        entry = {"file": path, **report.to_json()}
        if report.valid:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", MultinetSpanMismatch)
                comp = multinet_component(arr, net, field, label=f"net:{path}")
            agree = comp.subspace == multinet_equations_space(arr, net, report.base_locus, field)
            entry["equations_agree"] = agree
            entry["needs_review"] = not agree
            if comp.dim >= 2 and all(comp.subspace != c.subspace for c in components):
                components.append(comp)
        lines.append(f"multinet\t{path}\tvalid={str(report.valid).lower()}"
                     + ("" if report.valid else f"\tfailed={','.join(report.failures())}")
                     + (f"\tequations_agree={str(entry['equations_agree']).lower()}"
                        if "equations_agree" in entry else ""))
        nets.append(entry)
    return _arrangement_report(args, arr, components, nets, lines)


def cmd_graphic(args: argparse.Namespace) -> int:
    field = _field(args, Field.GF())
    g = Graph.load(args.graph)
    arr = graphic_arrangement(g)
    comps = graphic_components(g, field)
    lines = [f"kappa\t{g.kappa(2)},{g.kappa(3)},{g.kappa(4)}"]
    if not args.q:
        k2 = g.kappa(2)
        args.q = f"{max(k2 - 1, 2)}..{k2 + 1}"
    return _arrangement_report(args, arr, comps, [], lines)


def cmd_resonance(args: argparse.Namespace) -> int:
    problem = KoszulProblem.load(args.problem, _field(args))
    comps = [ResonanceComponent.load(p, problem.field) for p in args.component or []]
    docs, lines = [], [f"n\t{problem.n}", f"dim_K\t{problem.m}", f"dim_Kperp\t{problem.Kperp.dim}"]
    for c in comps:
        if c.n != problem.n:
            raise AmbientMismatch(f"component {c.label!r} lives in dimension {c.n}, not {problem.n}")
        d = component_report(c, problem)
        docs.append(d)
        lines.append("component\t{label}\tdim={dim}\tisotropic={i}\tseparable={s}\t"
                     "separable_pM={p}\tstrongly_isotropic={si}".format(
                         label=d["label"], dim=d["dim"], i=_flag(d["isotropic"]),
                         s=_flag(d["separable"]), p=_flag(d["separable_pM"]),
                         si=_flag(d["strongly_isotropic"])))
    vectors = []
    for text in args.vector or []:
        vec = [x for x in text.replace(" ", "").split(",") if x]
        if len(vec) != problem.n:
            raise AmbientMismatch(f"vector {text!r} does not have {problem.n} entries")
        res = in_resonance(vec, problem.Kperp)
        vectors.append({"vector": vec, "in_resonance": res})
        lines.append(f"vector\t{','.join(vec)}\tin_resonance={str(res).lower()}")
    doc = {"n": problem.n, "field": problem.field.tag, "dim_K": problem.m,
           "dim_Kperp": problem.Kperp.dim, "components": docs, "vectors": vectors}
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_generic_vanishing(args: argparse.Namespace) -> int:
    if args.witness:
        if args.n and parse_int_list(args.n) != [5]:
            raise MalformedInput("the witness check is defined for n = 5 only")
        field = _field(args, Field.GF())
        details = kronecker_witness_details(field)
        ok = (details["witness_maps_to_zero"] and details["witness_in_kernel"]
              and details["expansion_identity"] and details["dim_ker_D3"] >= 1
              and details["dim_W1"] >= 1)
        if args.format == "json":
            print(json.dumps({"witness": "PASS" if ok else "FAIL", **details}, indent=2))
        else:
            print("PASS" if ok else "FAIL")
            for k, v in details.items():
                print(f"# {k}\t{v}")
        return EXIT_OK if ok else EXIT_DISAGREE
    if not args.n:
        raise MalformedInput("--n is required (or --witness)")
    n_list = parse_int_list(args.n)
    if args.seeds is not None:
        seeds = parse_int_list(args.seeds)
    elif args.seed is not None:
        seeds = [args.seed]
    else:
        raise MalformedInput("give --seed or --seeds; there is no implicit randomness")
    if any(s < 0 for s in seeds):
        raise MalformedInput("seeds must be non-negative")
    prime = args.prime
    if args.field:
        f = Field.parse(args.field)
        if f.p is None:
            raise MalformedInput("random trials run over GF(p)")
        prime = f.p
    Field.GF(prime)
    q = int(args.q) if args.q is not None else None
    if args.out:
        reports = sweep_to_jsonl(args.out, n_list, seeds, q_override=q, m_override=args.m,
                                 prime=prime, jobs=args.jobs, timing=not args.no_timing)
    else:
        reports = sweep(n_list, seeds=seeds, q_override=q, m_override=args.m, prime=prime,
                        jobs=args.jobs)
    if args.format == "json" and not args.out:
        print(json.dumps([json.loads(r.to_json(not args.no_timing)) for r in reports], indent=2))
    elif not args.out:
        for r in reports:
            print(r.to_json(not args.no_timing))
    return EXIT_OK


# parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="QQ or GFp:<p> (default: file's field, else GFp:32003)")
    common.add_argument("--format", choices=("tsv", "json"), default="tsv")
    common.add_argument("--verify", action="store_true",
                        help="recompute every W_q through the dual route")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for trials")
    common.add_argument("--seed", type=int, help="seed for randomized commands")

    parser = _Parser(prog="koszulkit", description="Koszul modules, resonance and Chen ranks")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, func, help_ in (("wq", cmd_wq, "dim W_q for a range of q"),
                              ("hilbert", cmd_hilbert, "Hilbert table, resonance and base locus")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("problem", help="KoszulProblem JSON file")
        p.add_argument("--q", help="degree range a..b")
        p.add_argument("--method", choices=("auto", "delta2", "d3", "presentation"),
                       default="auto")
        p.set_defaults(func=func)

    p = sub.add_parser("arrangement", parents=[common], help="arrangement report")
    p.add_argument("arrangement", help="arrangement JSON file")
    p.add_argument("--multinet", action="append", help="multinet JSON (repeatable)")
    p.add_argument("--q", help="Chen-rank degrees a..b (default |A|-1..|A|+1)")
    p.set_defaults(func=cmd_arrangement)

    p = sub.add_parser("graphic", parents=[common], help="graphic arrangement report")
    p.add_argument("graph", help="edge list, one 'u v' per line, 1-indexed")
    p.add_argument("--q", help="Chen-rank degrees a..b (default kappa2-1..kappa2+1)")
    p.set_defaults(func=cmd_graphic)

    p = sub.add_parser("resonance", parents=[common], help="component and membership tests")
    p.add_argument("problem", help="KoszulProblem JSON file")
    p.add_argument("--component", action="append", help="component JSON (repeatable)")
    p.add_argument("--vector", action="append", help="comma-separated vector of V^* (repeatable)")
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("generic-vanishing", parents=[common], help="random trials as JSON lines")
    p.add_argument("--n", help="comma-separated list of n")
    p.add_argument("--seeds", help="comma-separated seeds")
    p.add_argument("--m", type=int, help="dim K (default 2n-2)")
    p.add_argument("--q", help="degree (default n-4)")
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--out", help="append JSON lines to this file (resumable)")
    p.add_argument("--no-timing", action="store_true", help="write ms as null for byte-stable output")
    p.add_argument("--witness", action="store_true", help="run the n=5 Kronecker witness check")
    p.set_defaults(func=cmd_generic_vanishing)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            if isinstance(exc.code, str):
                print(exc.code, file=sys.stderr)
            return EXIT_MALFORMED
        return EXIT_OK
    try:
        return args.func(args)
    except AmbientMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AMBIENT
    except RouteDisagreement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except (MalformedInput, PreconditionViolated, InvalidMultinet, FileNotFoundError,
            IsADirectoryError, PermissionError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
