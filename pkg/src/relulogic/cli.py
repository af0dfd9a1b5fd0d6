"""Command-line interface: ``relulogic <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .equiv import (DEFAULT_CAP, check_ik_equivalence, check_k_equivalence,
                    check_plain_equivalence, ik_grid_values, make_grid, plain_grid_values,
                    random_assignments)
from .logic import LogicId, classify, eval_formula, expand, props
from .networks import (FragmentError, formula_to_neuron, network_from_json, network_to_json,
                       network_to_terms)
from .syntax import format_formula, parse_formula
from .terms import ParseError, eval_term, format_term, parse_rational, parse_term, variables
from .translate import (formula_to_luk_proto, formula_to_term, luk_proto_to_formula,
                        network_to_logic, term_to_formula)

LOGICS = {lg.value: lg for lg in LogicId if lg is not LogicId.LukNoZero}
DIRECTIONS = ("term2logic", "logic2term", "logic2nn", "nn2logic", "luk-roundtrip")


class UsageError(Exception):
    pass


def _read(arg):
    return sys.stdin.read().strip() if arg == "-" else arg


def _assignment(text, prefix):
    out = {}
    if not text:
        return out
    for part in text.split(","):
        name, sep, val = part.partition("=")
        name = name.strip()
        if not sep or not name.startswith(prefix) or not name[1:].isdigit():
            raise UsageError(f"bad assignment {part!r}; expected {prefix}N=value")
        out[int(name[1:])] = parse_rational(val)
    return out


def _rational_list(text):
    return [parse_rational(v) for v in text.split(",") if v.strip()]


def _points(args, vars_, default_values, lo, hi):
    if args.samples is not None:
        if args.samples > args.cap:
            raise UsageError(f"--samples {args.samples} exceeds --cap {args.cap}")
        return random_assignments(vars_, args.samples, args.seed, lo, hi)
    values = _rational_list(args.grid) if args.grid else default_values
    return make_grid(vars_, values, args.cap)


def _formula_text(phi, args):
    if getattr(args, "expand", False):
        return format_formula(expand(phi, max_nodes=args.max_nodes), sugar=False)
    return format_formula(phi)


def _emit(doc, artifact, args):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(artifact if artifact.endswith("\n") else artifact + "\n")
    print(json.dumps(doc, indent=2))


# ---------------------------------------------------------------- commands

def cmd_eval_term(args):
    t = parse_term(_read(args.term))
    print(eval_term(t, _assignment(args.at, "x")))
    return 0


def cmd_eval_formula(args):
    phi = parse_formula(_read(args.formula))
    print(eval_formula(phi, _assignment(args.at, "p")))
    return 0


def cmd_classify(args):
    phi = parse_formula(_read(args.formula))
    print(json.dumps(classify(phi).to_json(), indent=2))
    return 0


def _logic(args, default, allowed):
    lg = LOGICS[args.logic] if args.logic else default
    if lg not in allowed:
        raise UsageError(f"--logic {lg.value} not supported here; choose from "
                         + ", ".join(x.value for x in allowed))
    return lg


def cmd_translate(args):
    src = _read(args.input)
    i = parse_rational(args.i) if args.i is not None else Fraction(1)
    k = parse_rational(args.k) if args.k is not None else None
    ok = True
    d = args.direction
    if d == "term2logic":
        lg = _logic(args, LogicId.RPLProd, (LogicId.RPLProd, LogicId.LPiHalf_ImpPMinus))
        t = parse_term(src)
        tr = term_to_formula(t, i, k, lg)
        text = _formula_text(tr.formula, args)
        doc = {"direction": d, "logic": lg.value, "i": str(i), "K": str(tr.K_min),
               "k": str(tr.k_value), "result": text}
        if args.verify:
            pts = _points(args, variables(t), ik_grid_values(i), -i, i)
            rep = check_ik_equivalence(tr.formula, t, i, tr.k_value, pts)
            doc["verification"] = rep.to_json()
            ok = rep.passed
        _emit(doc, text, args)
    elif d == "logic2term":
        phi = parse_formula(src)
        t = formula_to_term(phi)
        text = format_term(t)
        doc = {"direction": d, "result": text}
        if args.verify:
            pts = _points(args, props(phi), plain_grid_values(), 0, 1)
            rep = check_plain_equivalence(phi, t, pts)
            doc["verification"] = rep.to_json()
            ok = rep.passed
        _emit(doc, text, args)
    elif d == "logic2nn":
        phi = parse_formula(src)
        N = formula_to_neuron(phi)
        net = network_to_json(N)
        doc = {"direction": d, "depth": N.depth, "result": json.loads(net)}
        if args.verify:
            t = network_to_terms(N)[0]
            pts = _points(args, props(phi) | variables(t), plain_grid_values(), 0, 1)
            rep = check_plain_equivalence(phi, t, pts)
            doc["verification"] = rep.to_json()
            ok = rep.passed
        _emit(doc, net, args)
    elif d == "nn2logic":
        lg = _logic(args, LogicId.RPL, (LogicId.RPL, LogicId.LPiHalf_ProdMinus_ImpPMinus))
        if src != args.input or not os.path.exists(src):
            text_in = src
        else:
            with open(src) as fh:
                text_in = fh.read()
        N = network_from_json(text_in)
        trs = network_to_logic(N, i, lg, k, strategy=args.strategy)
        terms = network_to_terms(N)
        outs = []
        for t, tr in zip(terms, trs):
            entry = {"neuron": format_term(t), "D": str(tr.multiplier_D),
                     "K": str(tr.K_min), "result": _formula_text(tr.formula, args)}
            if args.verify:
                pts = _points(args, variables(t), ik_grid_values(i), -i, i)
                rep = check_ik_equivalence(tr.formula, t, i, tr.k_value, pts)
                entry["verification"] = rep.to_json()
                ok = ok and rep.passed
            outs.append(entry)
        doc = {"direction": d, "logic": lg.value, "strategy": args.strategy, "i": str(i),
               "k": str(trs[0].k_value), "outputs": outs}
        _emit(doc, "\n".join(o["result"] for o in outs), args)
    else:  # luk-roundtrip
        phi = parse_formula(src)
        lp = formula_to_luk_proto(phi)
        back = luk_proto_to_formula(lp, min(i, lp.k))
        text = format_formula(back)
        doc = {"direction": d, "proto_neuron": format_term(lp.term), "k": str(lp.k),
               "result": text, "syntactic-identity": back is phi}
        ok = back is phi
        _emit(doc, text, args)
    return 0 if ok else 1


def cmd_verify(args):
    left, right = _read(args.left), _read(args.right)
    if args.mode == "plain":
        phi, t = parse_formula(left), parse_term(right)
        pts = _points(args, props(phi) | variables(t), plain_grid_values(), 0, 1)
        rep = check_plain_equivalence(phi, t, pts)
        prefix = "x"
    elif args.mode == "ik":
        if args.k is None:
            raise UsageError("--mode ik needs --k")
        phi, t = parse_formula(left), parse_term(right)
        i = parse_rational(args.i) if args.i is not None else Fraction(1)
        pts = _points(args, props(phi) | variables(t), ik_grid_values(i), -i, i)
        rep = check_ik_equivalence(phi, t, i, parse_rational(args.k), pts)
        prefix = "x"
    else:
        if args.k is None:
            raise UsageError("--mode k needs --k")
        psi, phi = parse_formula(left), parse_formula(right)
        pts = _points(args, props(psi) | props(phi), plain_grid_values(), 0, 1)
        rep = check_k_equivalence(psi, phi, parse_rational(args.k), pts)
        prefix = "p"
    print(json.dumps(rep.to_json(prefix), indent=2))
    return 0 if rep.passed else 1


# ------------------------------------------------------------------ parser

def _sampling_flags(p):
    p.add_argument("--grid", help="comma-separated grid values per variable")
    p.add_argument("--samples", type=int, help="use N seeded random points instead of a grid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum number of points")


def build_parser():
    ap = argparse.ArgumentParser(prog="relulogic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval-term", help="evaluate a term exactly")
    p.add_argument("term", help="term text, or - for stdin")
    p.add_argument("--at", default="", help="assignment, e.g. x0=3,x1=1/2")
    p.set_defaults(fn=cmd_eval_term)

    p = sub.add_parser("eval-formula", help="evaluate a formula exactly")
    p.add_argument("formula", help="formula text, or - for stdin")
    p.add_argument("--at", default="", help="valuation, e.g. p0=1,p1=0")
    p.set_defaults(fn=cmd_eval_formula)

    p = sub.add_parser("translate", help="translate between terms, formulas and networks")
    p.add_argument("direction", choices=DIRECTIONS)
    p.add_argument("input", help="inline input, a network JSON path, or - for stdin")
    p.add_argument("--logic", choices=sorted(LOGICS))
    p.add_argument("--i", help="input bound i (default 1)")
    p.add_argument("--k", help="scaling k (default: the computed K)")
    p.add_argument("--strategy", choices=("inflate", "direct"), default="inflate",
                   help="proto-neuron construction for nn2logic")
    p.add_argument("--verify", action="store_true", help="check the result on a grid")
    p.add_argument("--expand", action="store_true", help="print primitive connectives only")
    p.add_argument("--max-nodes", type=int, default=1_000_000, help="size guard for --expand")
    p.add_argument("--out", help="also write the result artifact to this file")
    _sampling_flags(p)
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("verify", help="check an equivalence on a grid or random sample")
    p.add_argument("--mode", choices=("plain", "ik", "k"), required=True)
    p.add_argument("left", help="formula (psi for --mode k)")
    p.add_argument("right", help="term, or formula phi for --mode k")
    p.add_argument("--i")
    p.add_argument("--k")
    _sampling_flags(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("classify", help="report logic and fragment membership")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_classify)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, ParseError, FragmentError, ValueError, KeyError, OSError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"relulogic: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
