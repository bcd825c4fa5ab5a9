"""Interaction nets: a wiring permutation plus labelled, pointed cells.

A cell stores its full port cycle explicitly, principal port first, which
makes arity checks constant time and keeps the representation close to an
orbit list.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .errors import (
    ArityMismatch,
    CellNotEquivariant,
    CellPortIsLoop,
    CellPortNotPreserved,
    DisjointnessViolation,
    LabelNotPreserved,
    NotTotal,
    PortReuse,
    PrincipalNotPreserved,
    UnknownSymbol,
    WiringNotEquivariant,
)
from .perm import PartialInjection, WPermutation


class SymbolTable:
    """Maps symbol names to arities."""

    def __init__(self, entries: Mapping[str, int] = ()):
        self._entries = dict(entries)

    def declare(self, name: str, arity: int):
        if name in self._entries and self._entries[name] != arity:
            raise DisjointnessViolation(name)
        self._entries[name] = int(arity)

    def arity(self, name: str) -> int:
        try:
            return self._entries[name]
        except KeyError:
            raise UnknownSymbol(name) from None

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def names(self):
        return sorted(self._entries)

    def items(self):
        return sorted(self._entries.items())


@dataclass(frozen=True)
class Cell:
    """A labelled orbit of the cell permutation, principal port first."""

    symbol: str
    ports: Tuple[int, ...]

    def __post_init__(self):
        if len(set(self.ports)) != len(self.ports):
            raise PortReuse(next(p for p in self.ports if self.ports.count(p) > 1))

    @property
    def principal(self) -> int:
        return self.ports[0]

    @property
    def auxiliary(self) -> Tuple[int, ...]:
        return self.ports[1:]

    def __str__(self):
        aux = ",".join(map(str, self.auxiliary))
        return f"{self.symbol}({self.principal};{aux})"


@dataclass(frozen=True)
class Net:
    """A pair of a wiring and a set of cells over a common carrier."""

    wiring: WPermutation
    cells: frozenset

    def __init__(self, wiring: WPermutation = WPermutation(), cells: Iterable[Cell] = ()):
        object.__setattr__(self, "wiring", wiring)
        object.__setattr__(self, "cells", frozenset(cells))

    @cached_property
    def carrier(self) -> frozenset:
        return self.wiring.domain

    @property
    def loop_ports(self) -> frozenset:
        return self.wiring.loops

    @cached_property
    def proper_ports(self) -> frozenset:
        """Ports of the net: the carrier minus the loops."""
        return self.carrier - self.wiring.loops

    @cached_property
    def cell_ports(self) -> frozenset:
        return frozenset(p for c in self.cells for p in c.ports)

    @cached_property
    def free_ports(self) -> frozenset:
        return self.proper_ports - self.cell_ports

    def cell_at(self, port: int) -> Optional[Cell]:
        for cell in self.cells:
            if port in cell.ports:
                return cell
        return None

    def is_empty(self) -> bool:
        return not self.carrier and not self.cells

    def __str__(self):
        wires = "".join(f"({' '.join(map(str, o))})" for o in self.wiring.orbits())
        cells = " ".join(str(c) for c in sorted(self.cells, key=lambda c: c.ports))
        return f"({wires or '0'}, {cells or '0'})"


EMPTY_NET = Net()


class PortMap:
    """A total function on a net's carrier, the raw material of morphisms."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Mapping[int, int]):
        self._map = dict(mapping)

    def __call__(self, port: int) -> int:
        return self._map[port]

    def __contains__(self, port: int) -> bool:
        return port in self._map

    def items(self):
        return iter(self._map.items())

    @property
    def domain(self) -> frozenset:
        return frozenset(self._map)

    def compose(self, other: "PortMap") -> "PortMap":
        """self after other."""
        return PortMap({p: self._map[q] for p, q in other.items()})

    def __eq__(self, other):
        return isinstance(other, PortMap) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self):
        body = ", ".join(f"{s}->{t}" for s, t in sorted(self._map.items()))
        return f"PortMap({{{body}}})"


def validate(net: Net, symbols: SymbolTable):
    """Check all structural invariants of a net against a symbol table."""
    seen = {}
    for cell in net.cells:
        if cell.symbol not in symbols:
            raise UnknownSymbol(cell.symbol)
        if len(cell.ports) != symbols.arity(cell.symbol) + 1:
            raise ArityMismatch(cell)
        for p in cell.ports:
            if p in seen:
                raise PortReuse(p)
            seen[p] = cell
            if p not in net.proper_ports:
                raise CellPortIsLoop(p)


def port_partition(net: Net):
    """Split the carrier into loops, cell ports and free ports."""
    return net.loop_ports, net.cell_ports, net.free_ports


def rename(net: Net, bijection: PartialInjection) -> Net:
    """Relabel every port of the net through an injective map.

    The map may be defined on more than the carrier; it must cover it.
    """
    for p in net.carrier:
        if p not in bijection:
            raise NotTotal(p)
    wiring = WPermutation(
        [tuple(bijection(p) for p in orbit) for orbit in net.wiring.orbits()]
    )
    cells = [Cell(c.symbol, tuple(bijection(p) for p in c.ports)) for c in net.cells]
    return Net(wiring, cells)


def _cell_successor(cell: Cell, port: int) -> int:
    i = cell.ports.index(port)
    return cell.ports[(i + 1) % len(cell.ports)]


def check_morphism(source: Net, target: Net, f: PortMap):
    """Raise the first violated morphism condition, or return None."""
    for p in source.carrier:
        if p not in f:
            raise NotTotal(p)
    target_cell_ports = target.cell_ports
    cell_of = {p: c for c in target.cells for p in c.ports}
    for p in source.carrier:
        fp = f(p)
        if fp not in target.wiring or f(source.wiring(p)) != target.wiring(fp):
            raise WiringNotEquivariant(p)
    for cell in source.cells:
        for p in cell.ports:
            if f(p) not in target_cell_ports:
                raise CellPortNotPreserved(p)
            if f(_cell_successor(cell, p)) != _cell_successor(cell_of[f(p)], f(p)):
                raise CellNotEquivariant(p)
        image = cell_of[f(cell.principal)]
        if f(cell.principal) != image.principal:
            raise PrincipalNotPreserved(cell.principal)
        if cell.symbol != image.symbol:
            raise LabelNotPreserved(cell)


def is_morphism(source: Net, target: Net, f: PortMap) -> bool:
    from .errors import PermNetError

    try:
        check_morphism(source, target, f)
    except PermNetError:
        return False
    return True


def parallel_sum(a: Net, b: Net) -> Net:
    """Juxtapose two nets with disjoint carriers."""
    return Net(a.wiring + b.wiring, a.cells | b.cells)


def find_isomorphism(a: Net, b: Net, fix_free_ports: bool = False) -> Optional[PartialInjection]:
    """Search for a renaming between two nets.

    Backtracks over cell pairings bucketed by symbol; wires then force the
    rest of the map. With ``fix_free_ports`` the witness is the identity on
    free ports (an internal renaming).
    """
    if len(a.cells) != len(b.cells) or len(a.carrier) != len(b.carrier):
        return None
    if len(a.wiring.loops) != len(b.wiring.loops):
        return None

    def bucket(net):
        out: Dict[Tuple[str, int], list] = {}
        for c in net.cells:
            out.setdefault((c.symbol, len(c.ports)), []).append(c)
        return out

    ba, bb = bucket(a), bucket(b)
    if set(ba) != set(bb) or any(len(ba[k]) != len(bb[k]) for k in ba):
        return None

    keys = sorted(ba)
    cells_a = [c for k in keys for c in sorted(ba[k], key=lambda c: c.ports)]

    free_a = a.free_ports
    free_b = b.free_ports

    def try_assignment(pairing):
        mapping = {}
        for ca, cb in pairing:
            for p, q in zip(ca.ports, cb.ports):
                if mapping.setdefault(p, q) != q:
                    return None
        # propagate along wires until stable
        inv = {}
        for p, q in mapping.items():
            if inv.setdefault(q, p) != p:
                return None
        pending = list(mapping)
        while pending:
            p = pending.pop()
            q = mapping[p]
            p2 = a.wiring(p)
            q2 = b.wiring(q)
            if p2 in mapping:
                if mapping[p2] != q2:
                    return None
            else:
                if q2 in inv:
                    return None
                mapping[p2] = q2
                inv[q2] = p2
                pending.append(p2)
        # forced part done; now loops and unconstrained free wires
        for p, q in zip(sorted(a.wiring.loops), sorted(b.wiring.loops)):
            mapping[p] = q
        rest_a = sorted(w for w in a.wiring.wires if not (set(w) & mapping.keys()))
        rest_b = sorted(w for w in b.wiring.wires if not (set(w) & set(inv)))
        if len(rest_a) != len(rest_b):
            return None
        if fix_free_ports:
            for p, q in mapping.items():
                if p in free_a and p != q:
                    return None
            for w in rest_a:
                if w not in b.wiring.wires:
                    return None
                for p in w:
                    mapping[p] = p
        else:
            for wa, wb in zip(sorted(rest_a, key=min), sorted(rest_b, key=min)):
                pa = sorted(wa)
                pb = sorted(wb)
                mapping[pa[0]] = pb[0]
                mapping[pa[1]] = pb[1]
        if len(mapping) != len(a.carrier) or len(set(mapping.values())) != len(mapping):
            return None
        witness = PartialInjection(mapping)
        pm = PortMap(dict(mapping))
        if not is_morphism(a, b, pm):
            return None
        back = PortMap({t: s for s, t in mapping.items()})
        if not is_morphism(b, a, back):
            return None
        return witness

    def candidates():
        groups = [sorted(bb[k], key=lambda c: c.ports) for k in keys]
        per_key = [list(itertools.permutations(g)) for g in groups]
        for combo in itertools.product(*per_key):
            flat = [c for group in combo for c in group]
            yield list(zip(cells_a, flat))

    for pairing in candidates():
        witness = try_assignment(pairing)
        if witness is not None:
            return witness
    return None


def fresh_ports(count: int, *occupied: Iterable[int]):
    """Deterministic fresh ports: the smallest integers above everything in scope."""
    top = -1
    for coll in occupied:
        for p in coll:
            if p > top:
                top = p
    return list(range(top + 1, top + 1 + count))
