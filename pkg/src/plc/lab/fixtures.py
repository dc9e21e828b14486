"""Assertions bundled with the fixture files (see fixtures/manifest.json)."""
import json

from ..kripke import check_condition, eval_formula, load_structure, valid_in
from ..temporal import (eval_t, has_perfect_recall, is_coherent, is_static, is_synchronous,
                        load_system, satisfies_persist, satisfies_prior)
from .report import Record, Report, digest
from .suites import FIXTURES, check_scheme_on, pool_envs, slice_envs

SYSTEM_CHECKS = {
    "synchronous": is_synchronous,
    "perfect_recall": has_perfect_recall,
    "static": is_static,
    "prior": satisfies_prior,
    "coherent": is_coherent,
    "persist": satisfies_persist,
}


def manifest():
    return json.loads((FIXTURES / "manifest.json").read_text())


def load_fixture_file(name, kind):
    data = json.loads((FIXTURES / name).read_text())
    return load_structure(data, s5=False) if kind == "kripke" else load_system(data)


def _observe(obj, kind, a):
    if "formula" in a:
        if kind == "kripke":
            return eval_formula(obj, a["world"], a["formula"])
        return eval_t(obj, a["run"], int(a["time"]), a["formula"])
    if "valid" in a:
        return bool(valid_in(obj, a["valid"]))
    if "condition" in a:
        return bool(check_condition(obj, a["condition"]))
    if "check" in a:
        return bool(SYSTEM_CHECKS[a["check"]](obj))
    if "scheme" in a:
        envs = pool_envs() if kind == "kripke" else slice_envs
        return check_scheme_on("fixtures", a["scheme"], [("fixture", obj)], envs).verdict
    raise ValueError(f"unknown assertion {a}")


def run_fixture_assertions():
    rep = Report("fixtures")
    for name, entry in sorted(manifest().items()):
        obj = load_fixture_file(name, entry["kind"])
        for a in entry["assertions"]:
            got = _observe(obj, entry["kind"], a)
            want = a["expect"]
            label = next(k for k in ("formula", "valid", "condition", "check", "scheme") if k in a)
            rec = Record("fixtures", f"{label}:{a[label]}", None, digest([name, a]),
                         "valid" if got == want else "counterexample", "valid", 1,
                         None if got == want else {"kind": "assertion", "fixture": name,
                                                   "assertion": a, "got": got},
                         {"fixture": name})
            rep.add(rec)
    return rep
