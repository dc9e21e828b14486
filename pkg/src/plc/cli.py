"""Command-line front end.

Exit codes: 0 success or valid, 1 property fails or formula false,
2 usage or input error, 3 enumeration cap exceeded.
"""
import argparse
import json
import sys
import warnings

from . import caps
from .errors import CapExceeded, PlcError

OK, FALSE, USAGE, CAP = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _emit(args, data, text):
    if args.json:
        print(json.dumps(data, sort_keys=True, default=_jsonable))
    else:
        print(text)


def _jsonable(x):
    if isinstance(x, (set, frozenset, tuple)):
        return sorted(x, key=str)
    return str(x)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise _Usage(f"{path}: invalid JSON ({e})") from None


def _load_model(path):
    """A Kripke structure or an interpreted system, told apart by the 'runs' key."""
    from .kripke import load_structure
    from .temporal import load_system
    data = _load_json(path)
    if "runs" in data:
        return "system", load_system(data)
    return "kripke", load_structure(data, s5=False)


def _names(xs):
    return sorted((list(x) if isinstance(x, tuple) else x for x in xs), key=str)


# -- commands --------------------------------------------------------------

def cmd_parse(args):
    from .logic import depth, parse, props, to_text
    f = parse(args.formula)
    text = to_text(f)
    _emit(args, {"formula": text, "depth": depth(f), "props": sorted(props(f))}, text)
    return OK


def cmd_mc(args):
    kind, M = _load_model(args.file)
    if kind == "kripke":
        from .kripke import eval_formula, truth_set
        if args.world is not None:
            val = eval_formula(M, _world(M.worlds, args.world), args.formula)
            _emit(args, {"world": args.world, "formula": args.formula, "value": val},
                  "true" if val else "false")
            return OK if val else FALSE
        ext = truth_set(M, args.formula)
        missing = [w for w in M.worlds if w not in ext]
    else:
        from .temporal import eval_t, point_set
        if args.run is not None:
            if args.time is None:
                raise _Usage("--run needs --time")
            val = eval_t(M, args.run, args.time, args.formula)
            _emit(args, {"run": args.run, "time": args.time, "formula": args.formula,
                         "value": val}, "true" if val else "false")
            return OK if val else FALSE
        ext = point_set(M, args.formula)
        missing = [p for p in M.points if p not in ext]
    data = {"formula": args.formula, "true_at": _names(ext), "false_at": _names(missing),
            "valid": not missing}
    text = f"true at {len(ext)} of {len(ext) + len(missing)}"
    if missing:
        text += f"; false at {_names(missing)}"
    _emit(args, data, text)
    return OK if not missing else FALSE


def _world(worlds, name):
    for w in worlds:
        if str(w) == name:
            return w
    raise _Usage(f"no world {name!r}")


def _conds(text, default):
    if not text:
        return list(default)
    return [c.strip().upper() for c in text.split(",") if c.strip()]


def cmd_conditions(args):
    from .kripke import check_condition
    from .lab.gen import ALL_CONDITIONS
    _, M = _load_model(args.file)
    res = {c: check_condition(M, c) for c in _conds(args.conditions, ALL_CONDITIONS)}
    data = {c: {"holds": r.holds, "witness": r.witness} for c, r in res.items()}
    lines = [f"{c}: {'yes' if r else 'no'}" + ("" if r else f"  {r.witness}") for c, r in res.items()]
    _emit(args, data, "\n".join(lines))
    return OK if all(res.values()) else FALSE


def cmd_axioms(args):
    from .lab.gen import ClassSpec
    from .lab.suites import check_scheme
    spec = ClassSpec(agents=args.agents, max_worlds=args.max_worlds,
                     conditions=frozenset(_conds(args.conditions, ())),
                     backend=args.backend)
    expect = "counterexample" if args.expect_counterexample else "valid"
    rep = check_scheme(args.scheme, spec, args.depth, args.seed, args.random, expect)
    return _report(args, rep)


def cmd_diag(args):
    from .diagnosis import (bel_set_t, build_structure, build_system, format_fault,
                            load_circuit, parse_observation)
    circuit = load_circuit(_load_json(args.circuit) if args.circuit.endswith(".json") else args.circuit)
    obs = [parse_observation(o, circuit) for o in args.obs]

    def fmt(bel):
        return sorted((format_fault(f, circuit) for f in bel), key=lambda s: (s.count(","), s))

    if len(obs) == 1:
        from .diagnosis import bel_set
        M = build_structure(circuit, obs[0], args.order, args.max_faults)
        w = M.world_for(obs[0])
        if w is None:
            _emit(args, {"order": args.order, "bel": None}, "no world matches the observation")
            return FALSE
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            bel = fmt(bel_set(M, w))
        _emit(args, {"order": args.order, "bel": bel}, "Bel = {" + ", ".join(bel) + "}")
        return OK
    I = build_system(circuit, obs, args.order, args.max_faults)
    if I.actual is None:
        _emit(args, {"order": args.order, "bel": None}, "no run matches the observations")
        return FALSE
    rows = [fmt(bel_set_t(I, I.actual, m)) for m in range(len(obs))]
    _emit(args, {"order": args.order, "runs": len(I.runs), "bel": rows},
          "\n".join(f"m={m}: Bel = {{" + ", ".join(b) + "}" for m, b in enumerate(rows)))
    return OK


def cmd_system_check(args):
    from .lab.fixtures import SYSTEM_CHECKS
    from .temporal import load_system
    I = load_system(_load_json(args.file))
    names = _conds(args.checks, ())
    names = [n.lower() for n in names] or ["synchronous", "perfect_recall", "static", "prior",
                                            "coherent", "persist"]
    res = {}
    for n in names:
        if n not in SYSTEM_CHECKS:
            raise _Usage(f"unknown check {n!r}; choose from {sorted(SYSTEM_CHECKS)}")
        if n == "prior" and not I.priors:
            continue
        try:
            res[n] = SYSTEM_CHECKS[n](I)
        except PlcError as e:
            if isinstance(e, CapExceeded):
                raise
            res[n] = e
    data = {n: ({"holds": r.holds, "witness": r.witness} if hasattr(r, "holds") else {"error": str(r)})
            for n, r in res.items()}
    lines = [f"{n}: " + (("yes" if r else f"no  {r.witness}") if hasattr(r, "holds") else f"n/a ({r})")
             for n, r in res.items()]
    _emit(args, data, "\n".join(lines))
    return OK if all(hasattr(r, "holds") and r.holds for r in res.values()) else FALSE


def _report(args, rep):
    if args.json:
        for line in rep.lines():
            print(line)
    else:
        print(rep.summary())
        for r in rep.records:
            if r.witness is not None and r.witness.get("kind") in ("kripke", "system"):
                where = r.witness.get("world", r.witness.get("point"))
                print(f"  {r.scheme}: counterexample at {where}")
    return OK if rep.ok else FALSE


def cmd_suite(args):
    from .lab.suites import SUITES, run_suite
    from .lab.report import Report
    if args.agents != 1:
        raise _Usage("suites are single-agent")
    params = {"seed": args.seed}
    if args.max_worlds is not None:
        params["max_worlds"] = args.max_worlds
    if args.depth is not None:
        params["depth"] = args.depth
    names = sorted(SUITES) if args.name == "all" else [args.name]
    if args.name != "all" and args.name not in SUITES:
        raise _Usage(f"unknown suite {args.name!r}; choose from all, {', '.join(sorted(SUITES))}")
    merged = Report(args.name)
    if args.fixtures:
        from .lab.fixtures import run_fixture_assertions
        merged.records.extend(run_fixture_assertions().records)
        if args.name == "all" and args.fixtures_only:
            names = []
    for n in names:
        merged.records.extend(run_suite(n, **params).records)
    return _report(args, merged)


def cmd_oracle(args):
    from .kripke import eval_formula
    from .lab.oracles import preferential_oracle
    from .logic import Cond, parse, to_text
    kind, M = _load_model(args.file)
    if kind != "kripke":
        raise _Usage("the preferential oracle needs a Kripke structure")
    f = parse(args.formula)
    if not isinstance(f, Cond):
        raise _Usage("formula must be a conditional  phi ~>i psi")
    worlds = [_world(M.worlds, args.world)] if args.world else list(M.worlds)
    rows, agree = [], True
    for w in worlds:
        try:
            o = preferential_oracle(M, f.ante, f.cons, w, f.agent)
        except TypeError as e:
            raise _Usage(str(e)) from None
        e = eval_formula(M, w, f)
        agree &= o == e
        rows.append({"world": str(w), "eval": e, "oracle": o})
    _emit(args, {"formula": to_text(f), "rows": rows, "agree": agree},
          "\n".join(f"{r['world']}: eval={r['eval']} oracle={r['oracle']}" for r in rows))
    return OK if agree else FALSE


# -- entry point -------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="plc", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cap", help="cap overrides, e.g. enum=9,worlds=30")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse and pretty-print a formula")
    s.add_argument("formula")
    s.set_defaults(fn=cmd_parse)

    s = sub.add_parser("mc", parents=[common], help="model-check a formula")
    s.add_argument("file")
    s.add_argument("--formula", required=True)
    s.add_argument("--world")
    s.add_argument("--run")
    s.add_argument("--time", type=int)
    s.set_defaults(fn=cmd_mc)

    s = sub.add_parser("conditions", parents=[common], help="check structural conditions")
    s.add_argument("file")
    s.add_argument("--conditions", help="comma-separated, default all")
    s.set_defaults(fn=cmd_conditions)

    s = sub.add_parser("axioms", parents=[common], help="check one scheme over a class")
    s.add_argument("--scheme", required=True)
    s.add_argument("--conditions", default="")
    s.add_argument("--max-worlds", type=int, default=3)
    s.add_argument("--agents", type=int, default=1)
    s.add_argument("--depth", type=int, help="formula pool depth (default: all subsets)")
    s.add_argument("--random", type=int, default=0, help="extra random structures")
    s.add_argument("--backend", choices=("pref", "kappa", "mixed"), default="pref")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--expect-counterexample", action="store_true")
    s.set_defaults(fn=cmd_axioms)

    s = sub.add_parser("diag", parents=[common], help="circuit diagnosis")
    s.add_argument("--circuit", default="fulladder")
    s.add_argument("--obs", action="append", required=True,
                   help="observation like 'hi(l1),!hi(l2)'; repeat for a sequence")
    s.add_argument("--order", choices=("card", "subset"), default="card")
    s.add_argument("--max-faults", type=int)
    s.set_defaults(fn=cmd_diag)

    s = sub.add_parser("system-check", parents=[common], help="check an interpreted system")
    s.add_argument("file")
    s.add_argument("--checks", help="comma-separated, default all")
    s.set_defaults(fn=cmd_system_check)

    s = sub.add_parser("suite", parents=[common], help="run a lab suite")
    s.add_argument("name")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--agents", type=int, default=1)
    s.add_argument("--max-worlds", type=int)
    s.add_argument("--depth", type=int)
    s.add_argument("--fixtures", action="store_true", help="also run the bundled fixture assertions")
    s.add_argument("--fixtures-only", action="store_true", help="with 'all': only the fixtures")
    s.set_defaults(fn=cmd_suite)

    s = sub.add_parser("oracle", parents=[common],
                       help="compare a conditional with the preferential clause")
    s.add_argument("file")
    s.add_argument("--formula", required=True)
    s.add_argument("--world")
    s.set_defaults(fn=cmd_oracle)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    saved = caps.current()
    try:
        caps.reset()
        if args.cap:
            caps.set_caps(**caps.parse_overrides(args.cap))
        return args.fn(args)
    except CapExceeded as e:
        print(f"plc: {e}", file=sys.stderr)
        return CAP
    except (_Usage, PlcError, ValueError, KeyError) as e:
        print(f"plc: {e}", file=sys.stderr)
        return USAGE
    finally:
        caps.set_caps(**saved)


if __name__ == "__main__":
    sys.exit(main())
