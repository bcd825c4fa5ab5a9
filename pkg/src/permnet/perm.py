"""Finite partial injections and involutive permutations over integer ports.

The two composition routes for wirings live here:

* the definitional one, ``ex0_compose`` plus ``double_orbits``, which follows
  the execution formula and recovers closed chains as explicit orbit data;
* the operational one, ``full_ex_compose``, a chain walk that produces the
  same permutation in one pass over the cut injection (``splice_orbits`` is
  the slower orbit-table variant it is checked against).

Both are kept because the test suite checks them against each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Tuple, Union

from .errors import DisjointnessViolation, IllTyped


class PartialInjection:
    """An injective map between two finite sets of non-negative integers."""

    __slots__ = ("_fwd", "_bwd")

    def __init__(self, pairs: Union[Mapping[int, int], Iterable[Tuple[int, int]]] = ()):
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        fwd = {}
        bwd = {}
        for src, tgt in pairs:
            if src in fwd:
                raise DisjointnessViolation(src)
            if tgt in bwd:
                raise DisjointnessViolation(tgt)
            fwd[src] = tgt
            bwd[tgt] = src
        self._fwd = fwd
        self._bwd = bwd

    @classmethod
    def identity(cls, ports: Iterable[int]) -> "PartialInjection":
        return cls((p, p) for p in ports)

    @property
    def domain(self) -> frozenset:
        return frozenset(self._fwd)

    @property
    def codomain(self) -> frozenset:
        return frozenset(self._bwd)

    def __call__(self, port: int) -> int:
        return self._fwd[port]

    def inverse(self, port: int) -> int:
        return self._bwd[port]

    def get(self, port: int, default=None):
        return self._fwd.get(port, default)

    def __contains__(self, port: int) -> bool:
        return port in self._fwd

    def __len__(self) -> int:
        return len(self._fwd)

    def items(self) -> Iterator[Tuple[int, int]]:
        return iter(self._fwd.items())

    def star(self) -> "PartialInjection":
        """The inverse bijection."""
        return PartialInjection((t, s) for s, t in self._fwd.items())

    def restrict(self, sources: Iterable[int], targets: Iterable[int]) -> "PartialInjection":
        """Keep only the pairs with source in ``sources`` and target in ``targets``."""
        sources = set(sources)
        targets = set(targets)
        return PartialInjection(
            (s, t) for s, t in self._fwd.items() if s in sources and t in targets
        )

    def __add__(self, other: "PartialInjection") -> "PartialInjection":
        """Disjoint sum; raises DisjointnessViolation on a domain or codomain clash."""
        for s in other._fwd:
            if s in self._fwd:
                raise DisjointnessViolation(s)
        for t in other._bwd:
            if t in self._bwd:
                raise DisjointnessViolation(t)
        return PartialInjection(list(self._fwd.items()) + list(other._fwd.items()))

    def then(self, other: "PartialInjection") -> "PartialInjection":
        """Relational composition ``other ∘ self`` on the overlap."""
        return PartialInjection(
            (s, other._fwd[t]) for s, t in self._fwd.items() if t in other._fwd
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, PartialInjection) and self._fwd == other._fwd

    def __hash__(self) -> int:
        return hash(frozenset(self._fwd.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{s}->{t}" for s, t in sorted(self._fwd.items()))
        return f"PartialInjection({{{body}}})"


class WPermutation:
    """An involutive partial permutation stored as fixed points and 2-cycles."""

    __slots__ = ("_loops", "_wires", "_map")

    def __init__(self, orbits: Iterable[Iterable[int]] = ()):
        loops = set()
        wires = set()
        seen = set()
        for orbit in orbits:
            ports = tuple(orbit)
            if len(ports) == 1:
                members = ports
                loops.add(ports[0])
            elif len(ports) == 2 and ports[0] != ports[1]:
                members = ports
                wires.add(frozenset(ports))
            else:
                raise IllTyped(f"orbit {ports} is neither a fixed point nor a 2-cycle")
            for p in members:
                if p in seen:
                    raise DisjointnessViolation(p)
                seen.add(p)
        self._loops = frozenset(loops)
        self._wires = frozenset(wires)
        # keep the lookup table in ascending port order: walks over large
        # wirings then touch memory sequentially instead of in hash order
        mapping = {p: p for p in loops}
        for wire in wires:
            p, q = tuple(wire)
            mapping[p] = q
            mapping[q] = p
        self._map = dict(sorted(mapping.items()))

    @classmethod
    def from_injection(cls, inj: PartialInjection) -> "WPermutation":
        orbits = []
        done = set()
        for s, t in inj.items():
            if s in done:
                continue
            if s == t:
                orbits.append((s,))
                done.add(s)
            else:
                if inj(t) != s:
                    raise IllTyped(f"{inj!r} is not involutive", port=s)
                orbits.append((s, t))
                done.update((s, t))
        return cls(orbits)

    @property
    def loops(self) -> frozenset:
        return self._loops

    @property
    def wires(self) -> frozenset:
        if self._wires is None:
            self._wires = frozenset(
                frozenset((p, q)) for p, q in self._map.items() if p < q
            )
        return self._wires

    @property
    def domain(self) -> frozenset:
        return frozenset(self._map)

    def __call__(self, port: int) -> int:
        return self._map[port]

    def get(self, port: int, default=None):
        return self._map.get(port, default)

    def __contains__(self, port: int) -> bool:
        return port in self._map

    def orbits(self):
        out = [(p,) for p in sorted(self._loops)]
        out.extend(tuple(sorted(w)) for w in self.wires)
        out.sort(key=min)
        return out

    def as_injection(self) -> PartialInjection:
        return PartialInjection(self._map)

    def __add__(self, other: "WPermutation") -> "WPermutation":
        for p in other._map:
            if p in self._map:
                raise DisjointnessViolation(p)
        return WPermutation(self.orbits() + other.orbits())

    def __eq__(self, other) -> bool:
        return isinstance(other, WPermutation) and self._map == other._map

    def __hash__(self) -> int:
        return hash((self._loops, self.wires))

    def __repr__(self) -> str:
        body = "".join(f"({' '.join(map(str, o))})" for o in self.orbits())
        return f"WPermutation[{body or 'empty'}]"


@dataclass(frozen=True)
class DoubleOrbit:
    """A closed axiom-cut chain that the execution formula never reaches.

    ``left`` collects its ports on the first wiring, ``right`` the matching
    ports on the second; the representative is the least port of the union
    and becomes a fixed point of the full composition.
    """

    left: frozenset
    right: frozenset
    representative: int

    def __post_init__(self):
        if self.left & self.right:
            raise DisjointnessViolation(min(self.left & self.right))
        if self.representative != min(self.left | self.right):
            raise IllTyped("representative must be the least port of the double orbit")


def star(f: PartialInjection) -> PartialInjection:
    return f.star()


def restrict(f: PartialInjection, sources, targets) -> PartialInjection:
    return f.restrict(sources, targets)


def disjoint_sum(f: PartialInjection, g: PartialInjection) -> PartialInjection:
    return f + g


def _check_ex_typing(f: PartialInjection, g: PartialInjection):
    for p in g.domain:
        if p not in f.codomain:
            raise IllTyped("domain of g must lie inside codomain of f", port=p)
    for p in g.codomain:
        if p not in f.domain:
            raise IllTyped("codomain of g must lie inside domain of f", port=p)


def ex(f: PartialInjection, g: PartialInjection) -> PartialInjection:
    """Execution formula: the stationary union of the maps f(gf)^n.

    Computed by direct iteration per source port, which terminates because
    the intermediate values never repeat.
    """
    _check_ex_typing(f, g)
    out = {}
    bound = len(g) + 1
    for x in f.domain - g.codomain:
        y = f(x)
        steps = 0
        while y in g:
            y = f(g(y))
            steps += 1
            if steps > bound:  # unreachable when the typing holds
                raise IllTyped("execution failed to stabilize", port=x)
        out[x] = y
    return PartialInjection(out)


def _check_compose_typing(sigma: WPermutation, tau: WPermutation, f: PartialInjection):
    small, large = sigma._map, tau._map
    if len(small) > len(large):
        small, large = large, small
    overlap = [p for p in small if p in large]
    if overlap:
        raise DisjointnessViolation(min(overlap))
    for s, t in f.items():
        if s not in sigma._map:
            raise IllTyped("domain of the cut must lie in the first wiring", port=s)
        if t not in tau._map:
            raise IllTyped("codomain of the cut must lie in the second wiring", port=t)


def ex0_compose(sigma: WPermutation, tau: WPermutation, f: PartialInjection) -> WPermutation:
    """Compose two wirings along a cut injection, dropping closed chains."""
    _check_compose_typing(sigma, tau, f)
    combined = sigma.as_injection() + tau.as_injection()
    cut = f + f.star()
    return WPermutation.from_injection(ex(combined, cut))


def double_orbits(sigma: WPermutation, tau: WPermutation, f: PartialInjection):
    """The closed chains missed by ``ex0_compose``, one DoubleOrbit per chain.

    Each closed chain splits into two dual port classes; the one containing
    the least port of the chain is returned, so the representative of the
    result is that global least port.
    """
    _check_compose_typing(sigma, tau, f)
    cut = f + f.star()
    st_dom = sigma.domain | tau.domain

    visited = set()
    for x in st_dom - cut.domain:
        y = (sigma.get(x) if x in sigma else tau(x))
        while y in cut:
            visited.add(y)
            y2 = cut(y)
            visited.add(y2)
            y = sigma.get(y2) if y2 in sigma else tau(y2)

    def cls_from(x0):
        # orbit of the round-trip map, plus its image on the second wiring
        left = []
        x = x0
        while True:
            left.append(x)
            x = cut.inverse(tau(cut(sigma(x))))
            if x == x0:
                break
        right = [cut(sigma(u)) for u in left]
        return frozenset(left), frozenset(right)

    remaining = set(sigma.domain & f.domain) - visited
    out = []
    while remaining:
        x = min(remaining)
        left1, right1 = cls_from(x)
        x2 = sigma(x)
        if x2 in left1:
            whole = left1 | right1
            chosen = (left1, right1)
            remaining -= left1
        else:
            left2, right2 = cls_from(x2)
            whole = left1 | right1 | left2 | right2
            chosen = (left1, right1) if min(whole) in left1 | right1 else (left2, right2)
            remaining -= left1 | left2
        out.append(DoubleOrbit(chosen[0], chosen[1], min(whole)))
    return frozenset(out)


def splice_orbits(initial, cut_pairs):
    """Concatenate orbits along cut pairs, consuming the cut ports.

    ``initial`` is a list of orbits (1- or 2-tuples), ``cut_pairs`` a list
    of (p, q) with p and q in distinct roles; pairs are processed by
    ascending p. A pair whose two ports sit on the same live orbit closes
    it into a fixed point at the least port seen anywhere on that chain.
    Returns the final orbit list.
    """
    # live orbit table: id -> (ports, least port seen so far)
    orbits = {}
    index = {}
    for i, orbit in enumerate(initial):
        orbits[i] = (list(orbit), min(orbit))
        for p in orbit:
            index[p] = i
    next_id = len(orbits)
    loops = []
    for p, q in sorted(cut_pairs):
        wi, qi = index[p], index[q]
        ports_w, acc_w = orbits[wi]
        if wi == qi:
            del orbits[wi]
            for x in ports_w:
                del index[x]
            loops.append(acc_w)
            continue
        ports_q, acc_q = orbits[qi]
        rest = [x for x in ports_w if x != p] + [x for x in ports_q if x != q]
        acc = min(acc_w, acc_q)
        del orbits[wi], orbits[qi]
        for x in ports_w + ports_q:
            del index[x]
        if rest:
            orbits[next_id] = (rest, acc)
            for x in rest:
                index[x] = next_id
            next_id += 1
        else:
            loops.append(acc)
    result = [tuple(ports) for ports, _ in orbits.values()]
    result.extend((p,) for p in loops)
    return result


def full_ex_compose(sigma: WPermutation, tau: WPermutation, f: PartialInjection) -> WPermutation:
    """Orbit-splicing computation of the full composition.

    Walks the chains of the cut injection once; a chain that closes onto
    itself yields a fixed point at the least port seen anywhere on it,
    matching both the double-orbit route and ``splice_orbits``.
    """
    _check_compose_typing(sigma, tau, f)
    smap, tmap = sigma._map, tau._map
    fwd, bwd = f._fwd, f._bwd
    loops = []
    mapping = {}
    crossed = []  # domain-side cut ports of the pairs already crossed
    # open chains: walk inward from each surviving port
    for s in itertools.chain(smap, tmap):
        if s in fwd or s in bwd or s in mapping:
            continue
        pt = smap[s] if s in smap else tmap[s]
        while True:
            if pt in fwd:
                crossed.append(pt)
                other = fwd[pt]
            elif pt in bwd:
                other = bwd[pt]
                crossed.append(other)
            else:
                break
            pt = smap[other] if other in smap else tmap[other]
        if pt == s:
            loops.append(s)
            mapping[s] = s
        else:
            mapping[s] = pt
            mapping[pt] = s
    # a loop inside a chain reflects the walk, so pairs can be crossed twice;
    # deduplicate before deciding whether any closed chains remain
    visited = set(crossed)
    if len(visited) == len(fwd):
        out = WPermutation.__new__(WPermutation)
        out._loops = frozenset(loops)
        out._wires = None  # materialized on demand by the ``wires`` property
        out._map = mapping
        return out
    # closed chains: the cut pairs not crossed above
    for p in fwd:
        if p in visited:
            continue
        least = cur = p
        while True:
            if cur in fwd:
                visited.add(cur)
                other = fwd[cur]
            else:
                other = bwd[cur]
                visited.add(other)
            if other < least:
                least = other
            cur = smap[other] if other in smap else tmap[other]
            if cur < least:
                least = cur
            if cur == p:
                break
        loops.append(least)
        mapping[least] = least
    out = WPermutation.__new__(WPermutation)
    out._loops = frozenset(loops)
    out._wires = None  # materialized on demand by the ``wires`` property
    out._map = mapping
    return out
