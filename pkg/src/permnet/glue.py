"""Gluing nets along free ports, cuttings, interfaces and contexts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .errors import DisjointnessViolation, IllTyped, Mismatch, SizeMismatch
from .net import Net, PortMap, check_morphism, parallel_sum
from .perm import PartialInjection, full_ex_compose


@dataclass(frozen=True)
class Interface:
    """An ordered selection of free ports of some net."""

    ports: Tuple[int, ...]

    def __init__(self, ports):
        ports = tuple(ports)
        if len(set(ports)) != len(ports):
            raise DisjointnessViolation(next(p for p in ports if ports.count(p) > 1))
        object.__setattr__(self, "ports", ports)

    def __len__(self):
        return len(self.ports)

    def __iter__(self):
        return iter(self.ports)

    def concat(self, other: "Interface") -> "Interface":
        return Interface(self.ports + other.ports)


def canonical_interface(net: Net) -> Interface:
    """All free ports of the net in ascending order."""
    return Interface(sorted(net.free_ports))


@dataclass(frozen=True)
class Context:
    """A net together with one of its interfaces."""

    net: Net
    interface: Interface

    def __post_init__(self):
        free = self.net.free_ports
        for p in self.interface:
            if p not in free:
                raise IllTyped("interface port is not a free port", port=p)


@dataclass(frozen=True)
class CuttingWitness:
    """A decomposition of a net as left glued to right along an injection."""

    left: Net
    injection: PartialInjection
    right: Net


def glue(a: Net, f: PartialInjection, b: Net) -> Net:
    """Compose two nets along an injection between free ports."""
    overlap = a.carrier & b.carrier
    if overlap:
        raise DisjointnessViolation(min(overlap))
    free_a, free_b = a.free_ports, b.free_ports
    for s, t in f.items():
        if s not in free_a:
            raise IllTyped("gluing domain must consist of free ports", port=s)
        if t not in free_b:
            raise IllTyped("gluing codomain must consist of free ports", port=t)
    return Net(full_ex_compose(a.wiring, b.wiring, f), a.cells | b.cells)


def chord(i: Interface, j: Interface) -> PartialInjection:
    """The unique order-preserving bijection between two equal-size interfaces."""
    if len(i) != len(j):
        raise SizeMismatch(f"interfaces have sizes {len(i)} and {len(j)}")
    return PartialInjection(zip(i.ports, j.ports))


def context_glue(a: Context, b: Context) -> Net:
    return glue(a.net, chord(a.interface, b.interface), b.net)


def verify_cutting(whole: Net, witness: CuttingWitness):
    """Check that the witness reassembles exactly into the given net."""
    rebuilt = glue(witness.left, witness.injection, witness.right)
    if rebuilt.wiring != whole.wiring:
        diff = set(rebuilt.wiring.orbits()) ^ set(whole.wiring.orbits())
        raise Mismatch(f"wiring orbit {sorted(diff, key=min)[0]}")
    if rebuilt.cells != whole.cells:
        diff = rebuilt.cells ^ whole.cells
        raise Mismatch(f"cell {next(iter(diff))}")


def _resolve_consumed(mid: Net, f: PartialInjection, other: Net, q: int) -> int:
    """Follow the composed chain outward from a consumed port.

    Returns the surviving endpoint reached on that side, or the loop port
    when the chain closes onto itself.
    """
    cut = f + f.star()
    combined = {}
    combined.update((p, mid.wiring(p)) for p in mid.carrier)
    combined.update((p, other.wiring(p)) for p in other.carrier)
    visited = {q}
    cur = q
    while True:
        cur = cut(cur)
        visited.add(cur)
        nxt = combined[cur]
        if nxt not in cut:
            return nxt
        if nxt == q:
            return min(visited)
        visited.add(nxt)
        cur = nxt


def extend_morphism(source: Net, alpha: PortMap, mid: Net, f: PartialInjection, other: Net) -> PortMap:
    """Extend a morphism into one side of a gluing to the glued net.

    Ports whose image survives are kept; endpoints of a wire consumed by
    the composition follow the composed chain to its surviving endpoint,
    or to the loop port when the chain closed.
    """
    check_morphism(source, mid, alpha)
    glued = glue(mid, f, other)
    consumed = f.domain | f.codomain
    mapping = {}
    for p in source.carrier:
        q = alpha(p)
        mapping[p] = _resolve_consumed(mid, f, other, q) if q in consumed else q
    result = PortMap(mapping)
    check_morphism(source, glued, result)
    return result
