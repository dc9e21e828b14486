"""Brute-force diagnosis reference: truth tables over every line, no structures."""
from itertools import combinations, product

OPS = {"AND": all, "OR": any, "XOR": lambda vs: sum(vs) % 2 == 1, "NOT": lambda vs: not vs[0]}


def assignments(circuit):
    for vals in product((False, True), repeat=len(circuit.lines)):
        yield dict(zip(circuit.lines, vals))


def valid(circuit, fault, val):
    return all(g.name in fault or OPS[g.kind]([val[i] for i in g.inputs]) == val[g.output]
               for g in circuit.gates)


def world_count(circuit, max_faults):
    n = 0
    for k in range(max_faults + 1):
        for f in combinations(circuit.gate_names, k):
            n += sum(valid(circuit, set(f), v) for v in assignments(circuit))
    return n


def explains(circuit, fault, obs):
    return any(valid(circuit, fault, v) and all(v[l] == b for l, b in obs.items())
               for v in assignments(circuit))


def explanations(circuit, history):
    """Fault sets consistent with every observation so far."""
    out = []
    for k in range(len(circuit.gates) + 1):
        for f in combinations(circuit.gate_names, k):
            if all(explains(circuit, set(f), o) for o in history):
                out.append(frozenset(f))
    return out


def minimal(faults, order):
    if order == "card":
        if not faults:
            return set()
        low = min(map(len, faults))
        return {f for f in faults if len(f) == low}
    return {f for f in faults if not any(g < f for g in faults)}
