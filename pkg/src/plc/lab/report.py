"""JSON-lines reports, digests and replay of counterexamples."""
import hashlib
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

from .. import caps


def digest(obj):
    """Short stable hash of a JSON-able object (or of a string)."""
    text = obj if isinstance(obj, str) else json.dumps(obj, sort_keys=True, default=str)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


class Digest:
    """Running digest over the keys of every structure a check visited."""

    def __init__(self):
        self._h = hashlib.sha256()
        self.count = 0

    def add(self, key):
        self._h.update(repr(key).encode())
        self._h.update(b"\n")
        self.count += 1

    def hexdigest(self):
        return self._h.hexdigest()[:16]


@dataclass
class Record:
    suite: str
    scheme: str
    seed: Optional[int]
    structure_digest: str
    verdict: str               # "valid" or "counterexample"
    expect: str = "valid"
    checked: int = 0
    witness: Optional[Any] = None
    params: dict = field(default_factory=dict)
    caps: dict = field(default_factory=caps.current)

    @property
    def ok(self):
        return self.verdict == self.expect

    def to_json(self):
        d = asdict(self)
        d["ok"] = self.ok
        if d["witness"] is None:
            del d["witness"]
        return json.dumps(d, sort_keys=True, default=str)


@dataclass
class Report:
    suite: str
    records: list = field(default_factory=list)

    @property
    def ok(self):
        return all(r.ok for r in self.records)

    def add(self, rec):
        self.records.append(rec)
        return rec

    def failures(self):
        return [r for r in self.records if not r.ok]

    def lines(self):
        recs = sorted(self.records, key=lambda r: (r.suite, r.scheme, json.dumps(r.params, sort_keys=True)))
        return [r.to_json() for r in recs]

    def summary(self):
        bad = self.failures()
        head = f"{self.suite}: {len(self.records) - len(bad)}/{len(self.records)} checks as expected"
        return "\n".join([head] + [f"  FAILED {r.scheme} {r.params}: got {r.verdict}, expected {r.expect}"
                                   for r in bad])


def replay(witness):
    """Re-verify a serialized counterexample.  True iff it still refutes its claim."""
    from ..kripke import eval_formula, load_structure
    from ..logic import parse
    from ..temporal import eval_t, load_system

    kind = witness.get("kind")
    if kind == "kripke":
        M = load_structure(witness["structure"], s5=False, cap=False)
        for p in witness.get("premises", []):
            if not all(eval_formula(M, w, p) for w in M.worlds):
                return False
        return not eval_formula(M, _world(M.worlds, witness["world"]), witness["formula"])
    if kind == "system":
        I = load_system(witness["system"])
        for p in witness.get("premises", []):
            f = parse(p)
            if not all(_holds_or_undefined(I, r, m, f) for r, m in I.points):
                return False
        r, m = witness["point"]
        return not eval_t(I, r, int(m), witness["formula"])
    if kind == "check":
        from . import suites
        return suites.replay_check(witness)
    raise ValueError(f"unknown witness kind {kind!r}")


def _world(worlds, name):
    for w in worlds:
        if str(w) == str(name):
            return w
    raise ValueError(f"no world {name!r}")


def _holds_or_undefined(I, r, m, f):
    from ..errors import HorizonExceeded
    from ..temporal import eval_t
    try:
        return eval_t(I, r, m, f)
    except HorizonExceeded:
        return True
