"""Command-line entry point: ``wittdr {witt,endo,pd,rigidity,cech,suite}``."""

import argparse
import json
import sys

from .cech import build_complex
from .config import CONFIG_ENV, GROUPS, load_config
from .endo import apply_endo, compose as endo_compose, endo_from_json, inverse_endo
from .errors import ConfigInvalid, NotEigenclass, ParseError, WittDRError
from .groupoid import GroupoidPoint
from .parsing import parse_ring
from .pd import PDAlgebra, parse_pd, substitute
from .rigidity import frobenius_difference_poly, lemma59_kernel, pin_down_coefficient, splitting_section_solver
from .suite import dump_report, run_suite
from .units import decompose_gm_sharp, invert_special_unit, membership
from .witt import (
    frobenius,
    ghost,
    parse_vector,
    set_oracle,
    teichmuller,
    times_p,
    vector_to_json,
    verschiebung,
    witt_arith,
)


def _compact(obj):
    return json.dumps(obj, separators=(",", ":"))


def _json_args(text):
    """Split 'op v1 v2 ...' into the op name and a list of JSON values."""
    text = text.strip()
    op, _, rest = text.partition(" ")
    dec = json.JSONDecoder()
    values, pos = [], 0
    offset = len(op) + 1
    while True:
        while pos < len(rest) and rest[pos].isspace():
            pos += 1
        if pos >= len(rest):
            break
        try:
            val, pos = dec.raw_decode(rest, pos)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON argument: {exc.msg}", text, offset + exc.pos) from None
        values.append(val)
    return op, values


def _need(values, k, op, text):
    if len(values) != k:
        raise ParseError(f"{op} takes {k} argument(s), got {len(values)}", text, 0)


# -- witt ------------------------------------------------------------------------


def cmd_witt(args):
    ring = parse_ring(args.ring)
    p = args.p or _char_prime(ring)
    text = " ".join(args.expr)
    op, vals = _json_args(text)
    vec = lambda v: parse_vector(v, ring, p, args.n)
    if op in ("add", "sub", "mul"):
        _need(vals, 2, op, text)
        return vector_to_json(witt_arith(vec(vals[0]), vec(vals[1]), op))
    unary = {
        "neg": lambda x: -x,
        "F": frobenius,
        "Fchar": lambda x: frobenius(x, same_level=True),
        "V": verschiebung,
        "p": times_p,
        "inverse": invert_special_unit,
    }
    if op in unary:
        _need(vals, 1, op, text)
        return vector_to_json(unary[op](vec(vals[0])))
    if op == "ghost":
        _need(vals, 1, op, text)
        return [int(str(g)) if str(g).lstrip("-").isdigit() else str(g) for g in ghost(vec(vals[0]))]
    if op == "teich":
        _need(vals, 1, op, text)
        return vector_to_json(teichmuller(ring(vals[0]), p, args.n or 1))
    if op == "member":
        _need(vals, 2, op, text)
        return membership(vec(vals[1]), vals[0])
    if op == "decompose":
        _need(vals, 1, op, text)
        zeta, w = decompose_gm_sharp(vec(vals[0]))
        return {"zeta": str(zeta), "w": vector_to_json(w)}
    raise ParseError(f"unknown witt operation {op!r}", text, 0)


def _char_prime(ring):
    from .arith import prime_power

    c = ring.characteristic()
    pp = prime_power(c) if c else None
    if not pp:
        raise ConfigInvalid([f"--p: required for a ring of characteristic {c}"])
    return pp[0]


# -- endo ------------------------------------------------------------------------


def cmd_endo(args):
    ring = parse_ring(args.ring)
    p = args.p or _char_prime(ring)
    docs = []
    for i, raw in enumerate(args.elements):
        try:
            docs.append(json.loads(raw))
        except json.JSONDecodeError as exc:
            raise ParseError(f"argument {i + 1}: {exc.msg}", raw, exc.pos) from None
    if args.action == "compose":
        if len(docs) != 2:
            raise ParseError("compose takes two elements", " ".join(args.elements), 0)
        e1 = endo_from_json(docs[0], ring, p, level=args.level)
        e2 = endo_from_json(docs[1], ring, p, len(e1.u.coords), level=args.level)
        return endo_compose(e1, e2).to_json()
    if args.action == "apply":
        e = endo_from_json(docs[0], ring, p, level=args.level)
        n = e.u.n
        pt = GroupoidPoint(parse_vector(docs[1]["m"], ring, p, n), parse_vector(docs[1]["r"], ring, p, n))
        out = apply_endo(e, pt)
        return {"m": vector_to_json(out.m), "r": vector_to_json(out.r)}
    e = endo_from_json(docs[0], ring, p, level=args.level)
    return inverse_endo(e).to_json()


# -- pd --------------------------------------------------------------------------


def _pd_algebra(args):
    variables = []
    for part in args.vars.split(","):
        name, _, kind = part.strip().partition(":")
        variables.append((name, kind or "pd"))
    char = args.p if args.char_p else 0
    return PDAlgebra(args.p, variables, K=args.K, char=char)


def cmd_pd(args):
    A = _pd_algebra(args)
    if args.action == "mul":
        out = A.one()
        for e in args.exprs:
            out = out * parse_pd(e, A)
        return {"result": str(out)}
    if args.action == "gamma":
        if len(args.exprs) != 2:
            raise ParseError("gamma takes an expression and n", " ".join(args.exprs), 0)
        return {"result": str(A.gamma_of(parse_pd(args.exprs[0], A), int(args.exprs[1])))}
    # substitute EXPR name=image ...
    el = parse_pd(args.exprs[0], A)
    images, roots = {}, {}
    for rule in args.exprs[1:]:
        name, eq, image = rule.partition("=")
        if not eq:
            raise ParseError("expected name=image", rule, len(rule))
        if name.startswith("root:"):
            roots[name[5:]] = parse_pd(image, A)
        else:
            images[name] = parse_pd(image, A)
    return {"result": str(substitute(el, A, images, roots or None))}


def cmd_rigidity(args):
    if args.what == "section":
        return splitting_section_solver(args.p, args.step, args.K).to_json()
    if args.what == "pin-down":
        return pin_down_coefficient(args.p, args.N)
    if args.what == "lemma59":
        dim = lemma59_kernel(args.p, args.K, assert_odd=args.p != 2)
        data = frobenius_difference_poly(args.p)
        return {"p": args.p, "kernelDimension": dim, "difference": str(data["element"]),
                "extraTerms": {f"{k[0]},{k[1]}": v for k, v in data["extraTerms"].items()},
                "asserted": args.p in (3, 5)}
    data = frobenius_difference_poly(args.p)
    return {"p": args.p, "difference": str(data["element"]),
            "coefficients": data["coefficients"], "allNonzeroModP": data["allNonzeroModP"]}


# -- cech ------------------------------------------------------------------------


def _weight(cx, raw, level, d, zeta):
    try:
        return cx.weight_of_class(raw, level, d, zeta)
    except NotEigenclass:
        return None


def cmd_cech(args):
    p = args.p
    D = args.D if args.D is not None else p * p
    cx = build_complex(p, args.n_w, D)
    C = parse_ring(args.coefficients or f"F{p}[t]/(t^{p}-1)")
    zeta = C(args.zeta)
    out = {"p": p, "n_w": args.n_w, "D": D, "exactTruncation": cx.exact,
           "label": "stack cohomology", "degrees": {}}
    for d in range(D + 1):
        h = cx.cohomology(d)
        out["degrees"][str(d)] = {
            "dSquaredZero": cx.check_d_squared(d),
            "betti": [len(h["H0"]), len(h["H1"])],
            "H0": [{"class": cx.fmt(r), "weight": _weight(cx, r, 0, d, zeta)} for r in h["H0"]],
            "H1": [{"class": cx.fmt(r), "weight": _weight(cx, r, 1, d, zeta)} for r in h["H1"]],
        }
    return out


# -- suite -----------------------------------------------------------------------


def cmd_suite(args):
    cfg = load_config(args.config)
    if args.p:
        cfg["primes"] = [args.p]
    if args.ring:
        p = args.p or _char_prime(parse_ring(args.ring))
        cfg["rings"] = [{"ring": args.ring, "p": p, "n": args.n or 3}]
    elif args.n:
        cfg["rings"] = [dict(e, n=args.n) for e in cfg["rings"]]
    if args.n:
        cfg["wittLevels"] = [args.n]
    for key in ("seed", "jobs", "oracle"):
        if getattr(args, key) is not None:
            cfg[key] = getattr(args, key)
    if args.group:
        cfg["groups"] = args.group
    if args.out:
        cfg["out"] = args.out
    cfg = load_config(cfg)
    timings = {} if args.timings else None
    report = run_suite(cfg, timings=timings)
    text = dump_report(report)
    if cfg["out"]:
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.timings:
        with open(args.timings, "w") as fh:
            json.dump(timings, fh, indent=2, sort_keys=True)
    return None if report["summary"]["fail"] == 0 else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="wittdr", description="Witt vector and de Rham stack verifier.")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="prime")
    common.add_argument("--n", type=int, help="Witt level")
    common.add_argument("--ring", default=None, help="ring shorthand or JSON descriptor")
    common.add_argument("--oracle", choices=["none", "ghost", "enumerate"], default=None)

    w = sub.add_parser("witt", parents=[common], help="evaluate a Witt vector operation")
    w.add_argument("expr", nargs="+", help="e.g. 'add [1,0] [1,0]'")
    w.set_defaults(func=cmd_witt, ring_default="Z")

    e = sub.add_parser("endo", parents=[common], help="compose, apply or invert endomorphisms")
    e.add_argument("action", choices=["compose", "apply", "inverse"])
    e.add_argument("elements", nargs="+", help='JSON, e.g. {"u":[1,"a"],"i":1}')
    e.add_argument("--level", type=int, default=2, help="structure level")
    e.set_defaults(func=cmd_endo, ring_default="F4[a,b]")

    d = sub.add_parser("pd", help="divided-power algebra arithmetic")
    d.add_argument("action", choices=["mul", "gamma", "substitute"])
    d.add_argument("exprs", nargs="+")
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--vars", default="x", help="e.g. 'x,t:poly'")
    d.add_argument("--K", type=int, default=2)
    d.add_argument("--char-p", action="store_true", help="work over F_p instead of Q")
    d.set_defaults(func=cmd_pd)

    r = sub.add_parser("rigidity", help="pin-down coefficient, splitting sections, lemma kernel")
    r.add_argument("--p", type=int, required=True)
    r.add_argument("--what", choices=["section", "pin-down", "lemma59", "difference"], default="section")
    r.add_argument("--step", type=int, default=1)
    r.add_argument("--N", type=int, default=1)
    r.add_argument("--K", type=int, default=2)
    r.set_defaults(func=cmd_rigidity)

    c = sub.add_parser("cech", help="graded Cech complex: Betti numbers and weights")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--n-w", dest="n_w", type=int, default=3)
    c.add_argument("--D", type=int, default=None, help="degree bound (default p^2)")
    c.add_argument("--coefficients", default=None, help="ring containing zeta")
    c.add_argument("--zeta", default="t")
    c.set_defaults(func=cmd_cech)

    s = sub.add_parser("suite", parents=[common], help="run the verification suite")
    s.add_argument("--config", default=None, help=f"JSON config (default: ${CONFIG_ENV})")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--jobs", type=int, default=None)
    s.add_argument("--group", action="append", choices=GROUPS)
    s.add_argument("--out", default=None)
    s.add_argument("--timings", default=None, help="write per-check wall times here")
    s.set_defaults(func=cmd_suite)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "ring", "unset") is None and hasattr(args, "ring_default"):
        args.ring = args.ring_default
    if getattr(args, "oracle", None):
        set_oracle(args.oracle)
    try:
        out = args.func(args)
    except ConfigInvalid as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except WittDRError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.command == "suite":
        return out or 0
    print(_compact(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
