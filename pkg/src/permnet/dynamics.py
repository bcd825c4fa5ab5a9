"""Interaction rules, redex matching and reduction.

``apply`` performs a single, pure reduction step by cutting the redex out
and gluing a freshly renamed replacement context back in. ``normalize``
drives many steps over an incremental index of the net so each step costs
only the size of the touched region, not the whole net.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import DuplicateName, IllTyped, StaleRedex, SymbolMismatch
from .glue import Context, Interface, context_glue
from .net import Cell, Net, SymbolTable, fresh_ports, rename
from .perm import PartialInjection, WPermutation, splice_orbits


@dataclass(frozen=True)
class Rule:
    """A symbol pair plus the replacement context for its canonical redex."""

    left_symbol: str
    right_symbol: str
    replacement: Context

    @property
    def symbol_pair(self) -> Tuple[str, str]:
        return tuple(sorted((self.left_symbol, self.right_symbol)))


def validate_rule(rule: Rule, symbols: SymbolTable):
    from .net import validate

    validate(rule.replacement.net, symbols)
    expected = symbols.arity(rule.left_symbol) + symbols.arity(rule.right_symbol)
    if len(rule.replacement.interface) != expected:
        raise IllTyped(
            f"replacement interface has size {len(rule.replacement.interface)}, "
            f"expected {expected}"
        )
    if set(rule.replacement.interface) != rule.replacement.net.free_ports:
        raise IllTyped("replacement interface must be canonical (all free ports)")


class RuleSet:
    """At most one rule per unordered symbol pair."""

    def __init__(self, rules=()):
        self._rules: Dict[Tuple[str, str], Rule] = {}
        for rule in rules:
            self.add(rule)

    def add(self, rule: Rule):
        key = rule.symbol_pair
        if key in self._rules:
            raise DuplicateName("rule", "/".join(key))
        self._rules[key] = rule

    def lookup(self, s1: str, s2: str) -> Optional[Rule]:
        return self._rules.get(tuple(sorted((s1, s2))))

    def __iter__(self):
        return iter(self._rules.values())

    def __len__(self):
        return len(self._rules)

    def all_ports(self):
        for rule in self:
            yield from rule.replacement.net.carrier


@dataclass(frozen=True)
class ActivePair:
    """A wire linking two principal ports, oriented canonically."""

    wire: frozenset
    left_cell: Cell
    right_cell: Cell

    @classmethod
    def make(cls, wire, cell_a: Cell, cell_b: Cell) -> "ActivePair":
        ka = (cell_a.symbol, cell_a.principal)
        kb = (cell_b.symbol, cell_b.principal)
        if kb < ka:
            cell_a, cell_b = cell_b, cell_a
        return cls(frozenset(wire), cell_a, cell_b)


def lhs_redex(rule: Rule, symbols: SymbolTable, fresh_base: int = 0) -> Context:
    """The canonical redex net of a rule, ports allocated from a base upward.

    Layout: left principal, left auxiliaries, right principal, right
    auxiliaries, then the free partners of the left and right auxiliaries,
    which form the interface in that order.
    """
    n = symbols.arity(rule.left_symbol)
    m = symbols.arity(rule.right_symbol)
    b = fresh_base
    bs = [b + 1 + i for i in range(n)]
    c = b + n + 1
    cs = [c + 1 + j for j in range(m)]
    as_ = [b + n + m + 2 + i for i in range(n)]
    ds = [b + 2 * n + m + 2 + j for j in range(m)]
    orbits = [(b, c)]
    orbits.extend(zip(as_, bs))
    orbits.extend(zip(cs, ds))
    cells = [
        Cell(rule.left_symbol, tuple([b] + bs)),
        Cell(rule.right_symbol, tuple([c] + cs)),
    ]
    return Context(Net(WPermutation(orbits), cells), Interface(as_ + ds))


def active_pairs(net: Net) -> List[ActivePair]:
    """All wires linking two principal ports, by ascending smaller endpoint."""
    principal = {c.principal: c for c in net.cells}
    out = []
    for wire in net.wiring.wires:
        p, q = tuple(wire)
        if p in principal and q in principal:
            out.append(ActivePair.make(wire, principal[p], principal[q]))
    out.sort(key=lambda pair: min(pair.wire))
    return out


def match_redexes(net: Net, rules: RuleSet) -> List[Tuple[ActivePair, Rule]]:
    out = []
    for pair in active_pairs(net):
        rule = rules.lookup(pair.left_cell.symbol, pair.right_cell.symbol)
        if rule is not None:
            out.append((pair, rule))
    return out


def _orient(pair: ActivePair, rule: Rule) -> Tuple[Cell, Cell]:
    symbols = {pair.left_cell.symbol, pair.right_cell.symbol}
    if symbols != {rule.left_symbol, rule.right_symbol}:
        raise SymbolMismatch(
            f"pair {sorted(symbols)} does not match rule "
            f"{rule.left_symbol}/{rule.right_symbol}"
        )
    if pair.left_cell.symbol == rule.left_symbol:
        return pair.left_cell, pair.right_cell
    return pair.right_cell, pair.left_cell


def apply(net: Net, pair: ActivePair, rule: Rule) -> Net:
    """One reduction step at the given active pair."""
    if pair.wire not in net.wiring.wires:
        raise StaleRedex(f"wire {set(pair.wire)} is gone")
    if pair.left_cell not in net.cells or pair.right_cell not in net.cells:
        raise StaleRedex("redex cells are gone")
    left, right = _orient(pair, rule)
    n = len(left.auxiliary)
    m = len(right.auxiliary)
    repl = rule.replacement
    fresh = fresh_ports(
        n + m + len(repl.net.carrier), net.carrier, repl.net.carrier
    )
    attach = fresh[: n + m]
    beta = PartialInjection(zip(sorted(repl.net.carrier), fresh[n + m :]))

    position = {a: i for i, a in enumerate(left.auxiliary)}
    position.update({d: n + j for j, d in enumerate(right.auxiliary)})

    outer_orbits = []
    for orbit in net.wiring.orbits():
        if frozenset(orbit) == pair.wire:
            continue
        outer_orbits.append(
            tuple(attach[position[p]] if p in position else p for p in orbit)
        )
    outer = Net(WPermutation(outer_orbits), net.cells - {left, right})

    replacement = Context(
        rename(repl.net, beta), Interface(beta(p) for p in repl.interface)
    )
    return context_glue(Context(outer, Interface(attach)), replacement)


class _Engine:
    """Mutable reduction state: wiring map, cell indexes, match worklist."""

    def __init__(self, net: Net, rules: RuleSet):
        self.rules = rules
        self.wiring = {p: net.wiring(p) for p in net.carrier}
        self.cells = set(net.cells)
        self.principal = {c.principal: c for c in self.cells}
        self.matches: Dict[frozenset, Rule] = {}
        self.heap: List[Tuple[int, int, int]] = []
        top = max(net.carrier, default=-1)
        for p in rules.all_ports():
            top = max(top, p)
        self.next_fresh = top + 1
        for wire in net.wiring.wires:
            self._consider(wire)

    def _alloc(self, count: int) -> List[int]:
        out = list(range(self.next_fresh, self.next_fresh + count))
        self.next_fresh += count
        return out

    def _consider(self, wire: frozenset):
        p, q = tuple(wire)
        ca = self.principal.get(p)
        cb = self.principal.get(q)
        if ca is None or cb is None:
            return
        rule = self.rules.lookup(ca.symbol, cb.symbol)
        if rule is None:
            return
        self.matches[wire] = rule
        heapq.heappush(self.heap, (min(p, q), p, q))

    def pick_leftmost(self) -> Optional[frozenset]:
        while self.heap:
            _, p, q = self.heap[0]
            wire = frozenset((p, q))
            if wire in self.matches:
                return wire
            heapq.heappop(self.heap)
        return None

    def pick_random(self, rng: random.Random) -> Optional[frozenset]:
        if not self.matches:
            return None
        wires = sorted(self.matches, key=min)
        return wires[rng.randrange(len(wires))]

    def step(self, wire: frozenset):
        rule = self.matches.pop(wire)
        p, q = tuple(wire)
        pair = ActivePair.make(wire, self.principal[p], self.principal[q])
        left, right = _orient(pair, rule)
        n = len(left.auxiliary)
        m = len(right.auxiliary)
        repl = rule.replacement
        attach = self._alloc(n + m)
        beta = PartialInjection(
            zip(sorted(repl.net.carrier), self._alloc(len(repl.net.carrier)))
        )
        position = {a: i for i, a in enumerate(left.auxiliary)}
        position.update({d: n + j for j, d in enumerate(right.auxiliary)})

        # drop the two cells and every wire touching the redex
        for cell in (left, right):
            self.cells.remove(cell)
            del self.principal[cell.principal]
        del self.wiring[p], self.wiring[q]

        touched = []
        seen = set()
        for a in position:
            if a in seen:
                continue
            partner = self.wiring.pop(a)
            if partner != a:
                del self.wiring[partner]
            seen.update((a, partner))
            orbit = (a,) if partner == a else (a, partner)
            touched.append(tuple(attach[position[x]] if x in position else x for x in orbit))

        local = list(touched)
        for orbit in repl.net.wiring.orbits():
            local.append(tuple(beta(x) for x in orbit))
        cut = [(attach[i], beta(ip)) for i, ip in enumerate(repl.interface)]

        for cell in repl.net.cells:
            renamed = Cell(cell.symbol, tuple(beta(x) for x in cell.ports))
            self.cells.add(renamed)
            self.principal[renamed.principal] = renamed

        for orbit in splice_orbits(local, cut):
            if len(orbit) == 1:
                self.wiring[orbit[0]] = orbit[0]
            else:
                a, b = orbit
                self.wiring[a] = b
                self.wiring[b] = a
                self._consider(frozenset(orbit))

    def to_net(self) -> Net:
        orbits = []
        done = set()
        for p, q in self.wiring.items():
            if p in done:
                continue
            orbits.append((p,) if p == q else (p, q))
            done.update((p, q))
        return Net(WPermutation(orbits), self.cells)


def normalize(
    net: Net,
    rules: RuleSet,
    strategy: str = "leftmost",
    max_steps: int = 10**6,
    seed: Optional[int] = None,
    trace=None,
) -> Tuple[Net, int, bool]:
    """Reduce until no redex matches or the step budget runs out.

    ``strategy`` is ``leftmost`` (smallest active wire endpoint first) or
    ``random`` (uniform over current matches, driven by ``seed``). The
    optional ``trace`` callback receives (step_index, wire, rule, engine
    net) after every step.
    """
    if strategy not in ("leftmost", "random"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = random.Random(seed)
    engine = _Engine(net, rules)
    steps = 0
    while steps < max_steps:
        wire = engine.pick_leftmost() if strategy == "leftmost" else engine.pick_random(rng)
        if wire is None:
            break
        rule = engine.matches[wire]
        engine.step(wire)
        steps += 1
        if trace is not None:
            trace(steps, wire, rule, engine)
    return engine.to_net(), steps, not engine.matches
