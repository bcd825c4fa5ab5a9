"""Axiom/Cut nets and their Ex-collapse onto interaction nets.

An AC net keeps axiom wires and cut wires as two separate w-permutations
over one carrier. Collapsing executes the cuts against the axioms, turning
every maximal axiom-cut chain into a single wire and every cyclic chain
into a loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import (
    ArityMismatch,
    CellPortIsLoop,
    CutIsFixedPoint,
    CutNotBetweenAxioms,
    DisjointnessViolation,
    IllTyped,
    PortReuse,
    SizeMismatch,
    UnknownSymbol,
)
from .glue import Interface
from .net import Cell, Net, SymbolTable, fresh_ports
from .perm import PartialInjection, WPermutation, full_ex_compose


@dataclass(frozen=True)
class ACNet:
    """A triple of axiom wiring, cut wiring and cells."""

    axioms: WPermutation
    cuts: WPermutation
    cells: frozenset

    def __init__(
        self,
        axioms: WPermutation = WPermutation(),
        cuts: WPermutation = WPermutation(),
        cells: Iterable[Cell] = (),
    ):
        object.__setattr__(self, "axioms", axioms)
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "cells", frozenset(cells))

    @property
    def carrier(self) -> frozenset:
        return self.axioms.domain

    @property
    def ports(self) -> frozenset:
        """P(R): axiom ports that carry neither a cut nor a loop."""
        return self.carrier - self.cuts.domain - self.axioms.loops

    @property
    def cell_ports(self) -> frozenset:
        return frozenset(p for c in self.cells for p in c.ports)

    @property
    def free_ports(self) -> frozenset:
        return self.ports - self.cell_ports

    def is_cutfree(self) -> bool:
        return not self.cuts.domain

    def __str__(self):
        ax = "".join(f"({' '.join(map(str, o))})" for o in self.axioms.orbits())
        cu = "".join(f"({' '.join(map(str, o))})" for o in self.cuts.orbits())
        cells = " ".join(str(c) for c in sorted(self.cells, key=lambda c: c.ports))
        return f"({ax or '0'}, {cu or '0'}, {cells or '0'})"


def validate_ac(net: ACNet, symbols: SymbolTable):
    """Check the Def 6.1 invariants of an AC net."""
    for p in net.cuts.domain:
        if p not in net.axioms.domain:
            raise IllTyped("cut port is not an axiom port", port=p)
    for p in net.cuts.loops:
        raise CutIsFixedPoint(p)
    for wire in net.cuts.wires:
        a, b = sorted(wire)
        # each endpoint must sit on an axiom wire, and not both on the same one
        if net.axioms(a) == a or net.axioms(b) == b or net.axioms(a) == b:
            raise CutNotBetweenAxioms((a, b))
    allowed = net.ports
    seen = set()
    for cell in net.cells:
        if cell.symbol not in symbols:
            raise UnknownSymbol(cell.symbol)
        if len(cell.ports) != symbols.arity(cell.symbol) + 1:
            raise ArityMismatch(cell)
        for p in cell.ports:
            if p in seen:
                raise PortReuse(p)
            seen.add(p)
            if p not in allowed:
                raise CellPortIsLoop(p)


@dataclass(frozen=True)
class ACContext:
    """An AC net together with an ordered selection of its free ports."""

    net: ACNet
    interface: Interface

    def __post_init__(self):
        free = self.net.free_ports
        for p in self.interface:
            if p not in free:
                raise IllTyped("interface port is not a free port", port=p)


def juxtapose(a: ACContext, b: ACContext) -> ACNet:
    """Sum two AC contexts and cut their interfaces together pairwise."""
    overlap = a.net.carrier & b.net.carrier
    if overlap:
        raise DisjointnessViolation(min(overlap))
    if len(a.interface) != len(b.interface):
        raise SizeMismatch(
            f"interfaces have sizes {len(a.interface)} and {len(b.interface)}"
        )
    new_cuts = WPermutation(zip(a.interface, b.interface))
    return ACNet(
        a.net.axioms + b.net.axioms,
        a.net.cuts + b.net.cuts + new_cuts,
        a.net.cells | b.net.cells,
    )


def ex_collapse(net: ACNet) -> Net:
    """Execute the cuts against the axioms.

    The cut permutation is moved onto fresh ports by a delocalizing
    injection before composing; the result does not depend on that choice.
    """
    cut_ports = sorted(net.cuts.domain)
    f = PartialInjection(zip(cut_ports, fresh_ports(len(cut_ports), net.carrier)))
    delocalized = WPermutation(
        tuple(f(p) for p in orbit) for orbit in net.cuts.orbits()
    )
    return Net(full_ex_compose(net.axioms, delocalized, f), net.cells)


def cutfree_lift(net: Net) -> ACNet:
    """The unique cutfree AC net collapsing onto the given net."""
    return ACNet(net.wiring, WPermutation(), net.cells)


def ex_equivalent(a: ACNet, b: ACNet) -> bool:
    return ex_collapse(a) == ex_collapse(b)
