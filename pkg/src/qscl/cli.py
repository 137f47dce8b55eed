"""Command line front end.

Exit codes: 0 success, 2 malformed input, 3 input violating a precondition
(inadmissible exponent, element outside the computable fragment, ...).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import completions as comp
from . import quasimorphisms as qm
from . import wordmaps
from .chains import HChain, NotABoundaryError, parse_chain, normalize
from .ratlp import PIVOT_RULES, DimensionError, LPSyntaxError, format_solution, parse_lp, solve
from .scl_free import scl, scl_certificate
from .words import LETTERS, WordSyntaxError, format_rational, parse_rational, parse_word

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION = 0, 2, 3

DEFAULTS = {
    "alphabet": LETTERS,
    "ring": "Q",
    "format": "text",
    "certificate": None,
    "budget": 20000,
    "seed_cycles": 4,
    "rule": "bland",
}


class PreconditionError(Exception):
    pass


class Report:
    def __init__(self, command, input, value, text=None, certificate=None, citations=(), extra=None):
        self.command = command
        self.input = input
        self.value = value
        self.text = text
        self.certificate = certificate
        self.citations = list(citations)
        self.extra = extra or {}

    def to_json(self) -> dict:
        out = {"command": self.command, "input": self.input, "value": _jsonable(self.value)}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        out.update({k: _jsonable(v) for k, v in self.extra.items()})
        out["citations"] = self.citations
        return out

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, ensure_ascii=False)
        out = self.text if self.text is not None else _text(self.value)
        if self.certificate is not None:
            out += "\n" + json.dumps(self.certificate, indent=2)
        return out


def _text(v) -> str:
    if isinstance(v, (Fraction, int, float)):
        return format_rational(v)
    return str(v)


def _jsonable(v):
    if isinstance(v, (Fraction, float)) or (isinstance(v, int) and not isinstance(v, bool)):
        return format_rational(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _alphabet(names: str):
    return names.split(",") if "," in names else names


def _ring(args) -> comp.RationalSubgroup:
    return comp.RationalSubgroup.parse(args.ring)


# -- commands -------------------------------------------------------------------------


def cmd_scl(args) -> Report:
    alpha = _alphabet(args.alphabet)
    h = normalize(parse_chain(args.chain, alpha))
    cert = None
    if h and args.certificate is not None:
        try:
            c = scl_certificate(h, seed_cycles=args.seed_cycles, rule=args.rule)
        except NotABoundaryError:
            value, cert = float("inf"), {"value": "inf"}
        else:
            value, cert = c.value, c.to_json()
        if args.certificate != "-":
            with open(args.certificate, "w") as fh:
                json.dump(cert, fh, indent=2)
    else:
        value = scl(h, seed_cycles=args.seed_cycles, rule=args.rule)
    return Report(
        "scl", args.chain, value, certificate=cert if args.certificate == "-" else None,
        citations=["polygon LP over the letter-pairing surfaces of the chain, solved exactly"],
        extra={"normal_form": h.format(alpha)},
    )


def cmd_scl_q(args) -> Report:
    terms = comp.parse_fragment_chain(args.chain, _alphabet(args.alphabet))
    value = comp.scl_fragment(terms, _ring(args))
    return Report(
        "scl-q", args.chain, value,
        citations=["g^q maps to q*g in the homogenized chain group; the inclusion of the free group is isometric"],
        extra={"ring": str(_ring(args))},
    )


def cmd_scl_ext(args) -> Report:
    alpha = _alphabet(args.alphabet)
    ext = comp.RationalExtension(parse_word(args.z, alpha), parse_rational(args.a), _ring(args))
    values = [parse_rational(v) for v in args.values.split(",")] if args.values else []
    h = normalize(parse_chain(args.chain, alpha))
    value = comp.scl_extension_split(ext, h, values)
    return Report(
        "scl-ext", args.chain, value,
        citations=["split chains: the transfer across the amalgam is forced to d = (v/a) z"],
        extra={"extension": str(ext), "malnormal": comp.is_malnormal_extension(ext).value},
    )


def cmd_surface(args) -> Report:
    g = comp.surface_group(args.m)
    info = {
        "presentation": g.presentation(),
        "euler_characteristic": g.euler_characteristic,
        "demigenus": g.demigenus,
        "double_cover_genus": g.double_cover_genus,
    }
    if args.element is None:
        text = "\n".join(f"{k}: {v}" for k, v in info.items())
        return Report("surface", f"m={args.m}", None, text=text, extra=info)
    value = comp.scl_surface(args.m, args.element)
    return Report(
        "surface", args.element, value,
        citations=["t is sent to ([a1,b1]...[am,bm])^(1/2) in the rational completion of the free group, isometrically"],
        extra=info,
    )


def cmd_qm(args) -> Report:
    alpha = _alphabet(args.alphabet)
    family = [qm.CountingQM(parse_word(u, alpha)) for u in (args.u or [])]
    if args.action != "rank" and len(family) != 1:
        raise PreconditionError("give exactly one --u")
    q = family[0] if family else None
    if args.action == "eval":
        return Report("qm eval", args.word, q.evaluate(parse_word(args.word, alpha)))
    if args.action == "hom":
        return Report("qm hom", args.word, q.homogenized_value(parse_word(args.word, alpha)))
    if args.action == "defect":
        d = qm.defect_bound(q)
        return Report("qm defect", args.u[0], d.value, citations=[d.reason])
    chains = [normalize(parse_chain(c, alpha)) for c in (args.chain or [])]
    if args.action == "bound":
        if len(chains) != 1:
            raise PreconditionError("give exactly one --chain")
        b = qm.bavard_lower_bound(q, chains[0])
        return Report(
            "qm bound", args.chain[0], b, text=f"scl ≥ {format_rational(b)}",
            citations=["scl(c) >= phi(c) / (2 D(phi)) for homogeneous quasimorphisms phi"],
        )
    r = qm.independence_rank(family, chains)
    return Report("qm rank", {"u": args.u, "chains": args.chain}, r)


def cmd_wordmap(args) -> Report:
    w = wordmaps.parse_wordmap(args.word)
    report = wordmaps.classify_word(w)
    if args.action == "classify":
        return Report(
            "wordmap classify", args.word, report.classification, text=report.describe(),
            extra={"exponents": list(report.exponents), "description": report.describe()},
        )
    if args.target is None:
        raise PreconditionError("witness needs --target")
    h = comp.parse_fragment(args.target, _alphabet(args.alphabet))
    wit = wordmaps.surjectivity_witness(w, h)
    ok = wordmaps.verify_witness(w, wit, h)
    alpha = _alphabet(args.alphabet)
    shown = [e.format(alpha) for e in wit]
    return Report(
        "wordmap witness", args.word, shown,
        text=f"({', '.join(shown)})" + (" verified" if ok else " NOT verified"),
        extra={"verified": ok},
    )


def cmd_tower(args) -> Report:
    alpha = _alphabet(args.alphabet)
    h = normalize(parse_chain(args.chain, alpha))
    if args.z:
        tower = comp.root_tower(parse_word(args.z, alpha), args.stages, alphabet=alpha)
    else:
        tower = comp.build_tower_stage(alpha if isinstance(alpha, str) else "".join(alpha), args.length, _ring(args), args.stages)
    trace = comp.tower_scl_trace(tower, h)
    inf = comp.trace_infimum(trace)
    lines = [f"{label}: {_text(v)}" for label, v in zip(tower.labels(), trace)]
    lines.append(f"infimum: {_text(inf)}")
    return Report(
        "tower", args.chain, inf, text="\n".join(lines),
        citations=["scl on a directed union is the infimum over the stages"],
        extra={"trace": trace, "stages": [str(e) for e in tower.stages]},
    )


def cmd_lp(args) -> Report:
    text = sys.stdin.read() if args.file == "-" else open(args.file).read()
    lp = parse_lp(text)
    sol = solve(lp, rule=args.rule, seed=args.seed)
    return Report(
        "lp", args.file, sol.value if sol.optimal else sol.status, text=format_solution(sol).rstrip("\n"),
        extra={"status": sol.status, "primal": list(sol.primal or []), "dual": list(sol.dual or [])},
    )


# -- argument parsing ------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    p.add_argument("--alphabet", default=s, help="generator names: 'abc' or 'x1,x2,x3'")
    p.add_argument("--ring", default=s, help="Q, Z, Z[1/m], (p/q)Z or (p/q)Z[1/m]")
    p.add_argument("--format", choices=["text", "json"], default=s)
    p.add_argument("--certificate", default=s, metavar="PATH", help="write the scl certificate as JSON ('-' inlines it)")
    p.add_argument("--budget", type=int, default=s, help="search budget for combinatorial searches")
    p.add_argument("--seed-cycles", type=int, default=s, help="initial polygon length for column generation")
    p.add_argument("--rule", choices=PIVOT_RULES, default=s, help="simplex pivot rule")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="qscl", description="Exact stable commutator length calculator", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scl", parents=[common], help="scl of a chain in a free group")
    p.add_argument("chain")
    p.set_defaults(func=cmd_scl)

    p = sub.add_parser("scl-q", parents=[common], help="scl of rational powers in an A-completion")
    p.add_argument("chain")
    p.set_defaults(func=cmd_scl_q)

    p = sub.add_parser("scl-ext", parents=[common], help="scl in a rational extension, split chains")
    p.add_argument("chain")
    p.add_argument("--z", required=True)
    p.add_argument("--a", default="1")
    p.add_argument("--values", default="", help="comma separated elements of A")
    p.set_defaults(func=cmd_scl_ext)

    p = sub.add_parser("surface", parents=[common], help="non-orientable surface groups")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--element")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("qm", parents=[common], help="counting quasimorphisms")
    qsub = p.add_subparsers(dest="action", required=True)
    for action, needs_word, help_text in [
        ("eval", True, "raw count on a word"),
        ("hom", True, "homogenized value on a word"),
        ("bound", False, "lower bound for scl of --chain"),
        ("defect", False, "certified defect bound"),
        ("rank", False, "rank of the evaluation matrix of the --u family on the --chain list"),
    ]:
        a = qsub.add_parser(action, parents=[common], help=help_text)
        if needs_word:
            a.add_argument("word")
        else:
            a.set_defaults(word=None)
        a.add_argument("--u", action="append", required=action != "rank")
        a.add_argument("--chain", action="append")
    p.set_defaults(func=cmd_qm)

    p = sub.add_parser("wordmap", parents=[common], help="word maps on Q-groups")
    p.add_argument("action", choices=["classify", "witness"])
    p.add_argument("word")
    p.add_argument("--target")
    p.set_defaults(func=cmd_wordmap)

    p = sub.add_parser("tower", parents=[common], help="scl along a tower of extensions")
    p.add_argument("chain")
    p.add_argument("--stages", type=int, default=3)
    p.add_argument("--z", help="root tower over Z[1/k!] for this element")
    p.add_argument("--length", type=int, default=2, help="centraliser word length bound")
    p.set_defaults(func=cmd_tower)

    p = sub.add_parser("lp", parents=[common], help="solve a rational LP file")
    p.add_argument("file", help="LP in text form, '-' for stdin")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_lp)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for k, v in DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        report = args.func(args)
    except (WordSyntaxError, LPSyntaxError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PreconditionError, ValueError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(report.render(args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
