"""Bitmask evaluator shared by Kripke structures and interpreted systems.

Extensions are pairs (val, undef) of int masks over the frame's worlds;
``undef`` marks points where an X would look past the horizon and stays 0
for static structures.
"""
from .common import bits
from .errors import BadAgent, HorizonExceeded, UnknownProp, UnsupportedFormula
from .logic import formula as F


class Frame:
    """Worlds, valuation, knowledge cells and plausibility spaces as masks.

    ``know[i][w]`` is the mask of K_i(w); ``spaces[i][w]`` the space at
    (w, i); ``succ`` (optional) maps each world to its time successor or -1.
    """

    def __init__(self, labels, props, n_agents, know, spaces, succ=None):
        self.labels = tuple(labels)
        self.index = {w: k for k, w in enumerate(self.labels)}
        self.n = len(self.labels)
        self.full = (1 << self.n) - 1
        self.props = props
        self.n_agents = n_agents
        self.know = know
        self.spaces = spaces
        self.succ = succ
        self._memo = {}
        self._pos = {}
        self._loc = {}
        self._cells = {}
        self._groups = {}

    # -- helpers ---------------------------------------------------------
    def agent(self, i):
        if not isinstance(i, int) or not 1 <= i <= self.n_agents:
            raise BadAgent(f"agent {i!r} out of range 1..{self.n_agents}")
        return i

    def positions(self, space):
        key = id(space)
        pos = self._pos.get(key)
        if pos is None:
            pos = self._pos[key] = (space, [self.index[w] for w in space.worlds])
        return pos[1]

    def omega_mask(self, space):
        return sum(1 << p for p in self.positions(space))

    def local(self, space, g):
        key = (id(space), g)
        r = self._loc.get(key)
        if r is None:
            pos = self.positions(space)
            r = 0
            for k, p in enumerate(pos):
                if g >> p & 1:
                    r |= 1 << k
            self._loc[key] = r
        return r

    def to_mask(self, ws):
        m = 0
        for w in ws:
            m |= 1 << self.index[w]
        return m

    def members(self, m):
        return frozenset(self.labels[k] for k in bits(m))

    def cells(self, i):
        """[(K-mask, members-mask)] grouping worlds with the same K_i(w)."""
        r = self._cells.get(i)
        if r is None:
            acc = {}
            for w, k in enumerate(self.know[i]):
                acc[k] = acc.get(k, 0) | (1 << w)
            r = self._cells[i] = list(acc.items())
        return r

    def groups(self, i):
        """[(space, omega-mask, members-mask)] grouping worlds sharing a space object."""
        r = self._groups.get(i)
        if r is None:
            acc = {}
            for w, s in enumerate(self.spaces[i]):
                e = acc.get(id(s))
                if e is None:
                    acc[id(s)] = [s, self.omega_mask(s), 1 << w]
                else:
                    e[2] |= 1 << w
            r = self._groups[i] = [tuple(v) for v in acc.values()]
        return r

    # -- semantic operators on masks ---------------------------------------
    def op_know(self, i, a, ua=0):
        val = und = 0
        for k, mem in self.cells(i):
            if k & ua:
                und |= mem
            elif not k & ~a:
                val |= mem
        return val, und

    def op_cond(self, i, a, b, ua=0, ub=0):
        val = und = 0
        bad = ua | ub
        for s, om, mem in self.groups(i):
            if om & bad:
                und |= mem
                continue
            A = a & om
            la = self.local(s, A)
            if s.is_bottom_mask(la) or s.gt_mask(self.local(s, A & b), self.local(s, A & ~b)):
                val |= mem
        return val, und

    def op_believe(self, i, a, ua=0):
        c, uc = self.op_cond(i, self.full, a, 0, ua)
        return self.op_know(i, c, uc)

    def op_necess(self, i, a, ua=0):
        return self.op_cond(i, self.full & ~a, 0, ua, 0)

    def op_next(self, a, ua=0):
        if self.succ is None:
            raise UnsupportedFormula("X is not available in static structures")
        val = und = 0
        for w, s in enumerate(self.succ):
            if s < 0 or ua >> s & 1:
                und |= 1 << w
            elif a >> s & 1:
                val |= 1 << w
        return val, und

    # -- formulas --------------------------------------------------------
    def ext(self, f):
        r = self._memo.get(f)
        if r is not None:
            return r
        t = type(f)
        full = self.full
        if t is F.Top:
            r = (full, 0)
        elif t is F.Bot:
            r = (0, 0)
        elif t is F.Prop:
            try:
                r = (self.props[f.name], 0)
            except KeyError:
                raise UnknownProp(f.name) from None
        elif t is F.Not:
            v, u = self.ext(f.sub)
            r = (full & ~v, u)
        elif t in (F.And, F.Or, F.Implies):
            v1, u1 = self.ext(f.left)
            v2, u2 = self.ext(f.right)
            if t is F.And:
                v = v1 & v2
            elif t is F.Or:
                v = v1 | v2
            else:
                v = (full & ~v1) | v2
            r = (v, u1 | u2)
        elif t is F.Know:
            v, u = self.ext(f.sub)
            r = self.op_know(self.agent(f.agent), v, u)
        elif t is F.Cond:
            va, ua = self.ext(f.ante)
            vb, ub = self.ext(f.cons)
            r = self.op_cond(self.agent(f.agent), va, vb, ua, ub)
        elif t is F.Believe:
            v, u = self.ext(f.sub)
            r = self.op_believe(self.agent(f.agent), v, u)
        elif t is F.Necess:
            v, u = self.ext(f.sub)
            r = self.op_necess(self.agent(f.agent), v, u)
        elif t is F.Next:
            v, u = self.ext(f.sub)
            r = self.op_next(v, u)
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._memo[f] = r
        return r

    def holds_at(self, w, f):
        v, u = self.ext(f)
        if u >> w & 1:
            raise HorizonExceeded(f"X looks past the horizon at {self.labels[w]!r}")
        return bool(v >> w & 1)
