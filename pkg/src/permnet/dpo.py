"""Double-pushout rewriting: pushouts of gluings, complements, generalized rules.

Morphisms are carried around as their almost-injective decomposition: a
renaming of the source onto a copy inside the target, a gluing injection
and a residue net. All constructions here are syntactic gluings, so
pushout objects come out as concrete nets rather than quotients.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .errors import DisjointnessViolation, Mismatch
from .glue import CuttingWitness, glue, verify_cutting
from .net import (
    Net,
    PortMap,
    SymbolTable,
    fresh_ports,
    is_morphism,
    parallel_sum,
    rename,
)
from .perm import PartialInjection, WPermutation


@dataclass(frozen=True)
class AlmostInjective:
    """A net morphism presented as target = renamed(source) glued to a residue."""

    source: Net
    renaming_part: PortMap
    gluing_injection: PartialInjection
    residue: Net

    def renaming(self) -> PartialInjection:
        return PartialInjection(dict(self.renaming_part.items()))

    def image(self) -> Net:
        return rename(self.source, self.renaming())

    def target(self) -> Net:
        return glue(self.image(), self.gluing_injection, self.residue)


def validate_almost_injective(w: AlmostInjective):
    image = w.image()
    fwd = PortMap(dict(w.renaming_part.items()))
    back = PortMap({t: s for s, t in w.renaming_part.items()})
    if not is_morphism(w.source, image, fwd):
        raise Mismatch("renaming part is not a morphism onto its image")
    if not is_morphism(image, w.source, back):
        raise Mismatch("renaming part is not invertible as a morphism")
    w.target()


def identity_witness(net: Net) -> AlmostInjective:
    ident = PortMap({p: p for p in net.carrier})
    return AlmostInjective(net, ident, PartialInjection(), Net())


def pushout_of_gluings(
    base: Net,
    f: PartialInjection,
    left_residue: Net,
    g: PartialInjection,
    right_residue: Net,
) -> Net:
    """The pushout object of two gluings of the same base net."""
    clash = f.domain & g.domain
    if clash:
        raise DisjointnessViolation(min(clash))
    return glue(base, f + g, parallel_sum(left_residue, right_residue))


@dataclass(frozen=True)
class ComplementResult:
    """Output of the complement construction.

    ``inclusion`` embeds the inner net into the complement ``target``;
    ``cutting`` reassembles the outer target exactly from the renamed inner
    part, the combined injection and the glued-out residue.
    """

    inclusion: AlmostInjective
    cutting: CuttingWitness

    def complement_net(self) -> Net:
        return self.inclusion.target()


class _Coord:
    """Mutable holder for the complement's components during loop repair."""

    def __init__(self, inner_image, residue_b, residue_c, f1, f2a, f2b):
        self.a = inner_image
        self.b = residue_b
        self.c = residue_c
        self.f1 = dict(f1)
        self.f2a = dict(f2a)
        self.f2b = dict(f2b)

    def rebuild(self) -> Net:
        context = glue(self.b, PartialInjection(self.f2b), self.c)
        comb = PartialInjection(self.f1) + PartialInjection(self.f2a)
        return glue(self.a, comb, context)

    def rename_port(self, old: int, new: int):
        for name in ("a", "b", "c"):
            net = getattr(self, name)
            if old in net.carrier:
                bij = {p: p for p in net.carrier}
                bij[old] = new
                setattr(self, name, rename(net, PartialInjection(bij)))
        for table in (self.f1, self.f2a, self.f2b):
            for p, q in list(table.items()):
                if p == old or q == old:
                    del table[p]
                    table[new if p == old else p] = new if q == old else q

    def trace_chain(self, start: int) -> List[int]:
        """Ports of the closed wire-cut chain through ``start``."""
        wmap = {}
        for net in (self.a, self.b, self.c):
            for p in net.carrier:
                wmap[p] = net.wiring(p)
        kmap = {}
        for table in (self.f1, self.f2a, self.f2b):
            for p, q in table.items():
                kmap[p] = q
                kmap[q] = p
        ports = [start]
        cur = start
        while True:
            nxt = wmap[cur]
            if nxt == start:
                break
            ports.append(nxt)
            if nxt not in kmap:
                raise Mismatch(f"chain through {start} is not closed")
            cur = kmap[nxt]
            if cur == start:
                break
            ports.append(cur)
        return ports


def complement(
    inner: Net, mid_witness: AlmostInjective, outer_witness: AlmostInjective
) -> ComplementResult:
    """Complete inner -> mid -> outer into a pushout square.

    Produces the subnet of the outer target spanned by the inner net and
    the outer residue. Loops recovered across the two gluing stages can
    surface at the wrong port, so the target's loop names are threaded
    back onto cut ports visible at the stage where each chain closes;
    the resulting cutting witness then matches the target exactly.
    """
    if mid_witness.source != inner:
        raise Mismatch("mid witness does not start from the inner net")
    mid_target = mid_witness.target()
    if mid_target != outer_witness.source:
        raise Mismatch("outer witness does not start from the mid target")
    target = outer_witness.target()

    b1 = mid_witness.renaming()
    f1 = mid_witness.gluing_injection
    res_b = mid_witness.residue
    b2 = outer_witness.renaming()
    f2 = outer_witness.gluing_injection
    res_c = outer_witness.residue

    scope = [
        target.carrier,
        inner.carrier,
        res_b.carrier,
        res_c.carrier,
        b1.codomain,
        b2.codomain,
    ]
    counter = [max((max(s, default=-1) for s in scope), default=-1) + 1]
    fresh_base = counter[0]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    # extend the outer renaming over ports consumed at the first gluing;
    # a loop representative of the mid net is both consumed and a carrier
    # port, so the carrier entries must win
    b2ext = {p: b2(p) for p in b2.domain}
    for p in sorted(f1.domain | f1.codomain):
        b2ext.setdefault(p, fresh())
    b2p = PartialInjection(b2ext)

    inner_image = rename(rename(inner, b1), b2p)
    residue_b = rename(res_b, b2p)
    f1p = {b2p(x): b2p(y) for x, y in f1.items()}
    f2a = {}
    f2b = {}
    for x, y in f2.items():
        (f2a if x in inner_image.carrier else f2b)[x] = y

    coord = _Coord(inner_image, residue_b, res_c, f1p, f2a, f2b)
    rebuilt = coord.rebuild()
    if rebuilt.wiring.wires != target.wiring.wires or rebuilt.cells != target.cells:
        raise Mismatch("complement components do not reassemble the target")

    history: List[Tuple[int, int]] = []

    def do_rename(old: int, new: int):
        coord.rename_port(old, new)
        history.append((old, new))

    for extra in sorted(rebuilt.wiring.loops - target.wiring.loops):
        chain = coord.trace_chain(extra)
        kept = [p for p in chain if p < fresh_base]
        if not kept or min(kept) not in target.wiring.loops:
            raise Mismatch(f"unmatched recovered loop at {extra}")
        wanted = min(kept)
        outer_cuts = set(coord.f1) | set(coord.f1.values())
        outer_cuts |= set(coord.f2a) | set(coord.f2a.values())
        slots = [p for p in chain if p in outer_cuts]
        if not slots or wanted in slots:
            raise Mismatch(f"cannot thread loop port {wanted}")
        do_rename(wanted, fresh())
        do_rename(slots[0], wanted)
    rebuilt = coord.rebuild()
    if rebuilt != target:
        raise Mismatch("loop repair failed to reproduce the target")

    def final(name: int) -> int:
        for old, new in history:
            if name == old:
                name = new
        return name

    beta = PortMap({p: final(b2p(b1(p))) for p in inner.carrier})
    inclusion = AlmostInjective(inner, beta, PartialInjection(coord.f2a), coord.c)
    comb = PartialInjection(coord.f1) + PartialInjection(coord.f2a)
    context = glue(coord.b, PartialInjection(coord.f2b), coord.c)
    cutting = CuttingWitness(coord.a, comb, context)
    verify_cutting(target, cutting)
    return ComplementResult(inclusion, cutting)


@dataclass(frozen=True)
class GeneralizedRule:
    """A span of almost injective inclusions out of an interface net."""

    interface_net: Net
    into_redex: AlmostInjective
    into_replacement: AlmostInjective


def validate_generalized_rule(rule: GeneralizedRule):
    left = rule.into_redex
    right = rule.into_replacement
    if left.source != rule.interface_net or right.source != rule.interface_net:
        raise Mismatch("both inclusions must start from the interface net")

    def cut_preimage(w: AlmostInjective) -> frozenset:
        ren = w.renaming()
        return frozenset(
            p for p in w.source.carrier if ren(p) in w.gluing_injection.domain
        )

    if cut_preimage(left) != cut_preimage(right):
        raise Mismatch("gluing domains of the two inclusions differ")


def lift_rule(rule, symbols: SymbolTable) -> GeneralizedRule:
    """The generalized form of an interaction rule.

    The interface net is one wire per interface position, glued onto the
    redex at its free ports and onto the replacement along the canonical
    interface bijection.
    """
    from .dynamics import lhs_redex

    redex_ctx = lhs_redex(rule, symbols)
    redex = redex_ctx.net
    repl = rule.replacement
    m = len(redex_ctx.interface)

    fresh = fresh_ports(4 * m, redex.carrier, repl.net.carrier)
    tails = fresh[:m]
    stubs = fresh[m : 2 * m]
    repl_stubs = fresh[2 * m : 3 * m]
    repl_tails = fresh[3 * m :]

    iface = list(redex_ctx.interface)
    interface_net = Net(WPermutation(zip(iface, tails)))

    # redex side: cut each interface wire where it meets the cells
    stub_of = {d: stubs[i] for i, d in enumerate(iface)}
    redex_residue = Net(
        WPermutation(
            tuple(stub_of.get(p, p) for p in orbit)
            for orbit in redex.wiring.orbits()
        ),
        redex.cells,
    )
    into_redex = AlmostInjective(
        interface_net,
        PortMap({p: p for p in interface_net.carrier}),
        PartialInjection(zip(tails, stubs)),
        redex_residue,
    )

    # replacement side: the positional interface bijection, lifted
    repl_iface = list(repl.interface)
    repl_stub_of = {p: repl_stubs[i] for i, p in enumerate(repl_iface)}
    ren = {d: repl_iface[i] for i, d in enumerate(iface)}
    ren.update({t: repl_tails[i] for i, t in enumerate(tails)})
    repl_residue = rename(
        repl.net,
        PartialInjection({p: repl_stub_of.get(p, p) for p in repl.net.carrier}),
    )
    into_replacement = AlmostInjective(
        interface_net,
        PortMap(ren),
        PartialInjection(zip(repl_tails, repl_stubs)),
        repl_residue,
    )

    out = GeneralizedRule(interface_net, into_redex, into_replacement)
    validate_generalized_rule(out)
    return out


def find_occurrence(net: Net, pair, rule, symbols: SymbolTable) -> AlmostInjective:
    """The inclusion of a rule's canonical redex at an active pair of a net."""
    from .dynamics import _orient, lhs_redex

    left, right = _orient(pair, rule)
    redex_ctx = lhs_redex(rule, symbols)
    redex = redex_ctx.net
    n = len(left.auxiliary)
    m = len(right.auxiliary)

    fresh = fresh_ports(2 * (n + m), net.carrier, redex.carrier)
    outs = fresh[: n + m]
    attach = fresh[n + m :]

    lcell, rcell = sorted(redex.cells, key=lambda c: c.principal)
    beta = {lcell.principal: left.principal, rcell.principal: right.principal}
    beta.update(zip(lcell.auxiliary, left.auxiliary))
    beta.update(zip(rcell.auxiliary, right.auxiliary))
    for i, p in enumerate(redex_ctx.interface):
        beta[p] = outs[i]

    position = {a: i for i, a in enumerate(left.auxiliary)}
    position.update({d: n + j for j, d in enumerate(right.auxiliary)})
    residue_orbits = []
    for orbit in net.wiring.orbits():
        if frozenset(orbit) == pair.wire:
            continue
        residue_orbits.append(
            tuple(attach[position[p]] if p in position else p for p in orbit)
        )
    residue = Net(WPermutation(residue_orbits), net.cells - {left, right})
    return AlmostInjective(
        redex, PortMap(beta), PartialInjection(zip(outs, attach)), residue
    )


def generalized_reduce(
    target: Net, rule: GeneralizedRule, occurrence: AlmostInjective
) -> Net:
    """Reduce the target by cutting out the redex image and gluing in the
    replacement residue through the shared interface net."""
    if occurrence.source != rule.into_redex.target():
        raise Mismatch("occurrence does not include the rule's redex")
    ri = rule.interface_net
    ar = rule.into_redex.renaming()
    fr = rule.into_redex.gluing_injection
    ap = rule.into_replacement.renaming()
    fp = rule.into_replacement.gluing_injection
    repl_residue = rule.into_replacement.residue
    beta = occurrence.renaming()
    g = occurrence.gluing_injection
    residue = occurrence.residue

    count = len(repl_residue.carrier) + len(ri.carrier)
    fresh = fresh_ports(
        count, target.carrier, residue.carrier, ri.carrier, repl_residue.carrier
    )
    rho = PartialInjection(zip(sorted(repl_residue.carrier), fresh))
    extra = iter(fresh[len(repl_residue.carrier) :])

    copy = {}
    cuts = {}
    for p in sorted(ri.carrier):
        q = ar(p)
        if q in fr:
            copy[p] = next(extra)
            cuts[copy[p]] = rho(fp(ap(p)))
        else:
            image_port = beta(q)
            if image_port in g:
                copy[p] = next(extra)
                cuts[copy[p]] = g(image_port)
            else:
                copy[p] = image_port
    copy_ri = rename(ri, PartialInjection(copy))
    return glue(
        copy_ri,
        PartialInjection(cuts),
        parallel_sum(residue, rename(repl_residue, rho)),
    )
