"""Shared generators and independent oracles for the test suite.

The oracles deliberately avoid the library's composition code paths:
``oracle_ex`` materializes the execution formula as a union of relational
composites, and ``oracle_splice`` chases axiom-cut chains over adjacency
dictionaries.
"""

import itertools
import random

from permnet import (
    ACNet,
    Cell,
    Context,
    Interface,
    Net,
    PartialInjection,
    Rule,
    RuleSet,
    SymbolTable,
    WPermutation,
)


def oracle_ex(f: PartialInjection, g: PartialInjection) -> PartialInjection:
    """Ex(f,g) as the stationary union of the terms f(gf)^n."""
    out = {}
    step = f.then(g)  # g after f
    cur = PartialInjection.identity(f.domain)
    for _ in range(len(g) + 2):
        term = cur.then(f)  # f after cur
        for s, t in term.items():
            if s in g.codomain or t in g.domain:
                continue
            if s in out:
                assert out[s] == t, "execution sum is inconsistent"
            out[s] = t
        if not len(term):
            break
        cur = cur.then(step)
    return PartialInjection(out)


def oracle_splice(orbit_lists, cut_pairs):
    """Chain-chasing oracle for wiring composition.

    Returns (wires, loops): open axiom-cut chains become a wire between
    their surviving endpoints, closed chains a loop at their least port.
    """
    partner = {}
    for orbits in orbit_lists:
        for orbit in orbits:
            if len(orbit) == 1:
                partner[orbit[0]] = orbit[0]
            else:
                p, q = orbit
                partner[p] = q
                partner[q] = p
    cut = {}
    for p, q in cut_pairs:
        cut[p] = q
        cut[q] = p

    wires = set()
    loops = set()
    visited = set()
    for s in partner:
        if s in cut or s in visited:
            continue
        t = partner[s]
        while t in cut:
            visited.add(t)
            other = cut[t]
            visited.add(other)
            t = partner[other]
        visited.update((s, t))
        if s == t:
            loops.add(s)
        else:
            wires.add(frozenset((s, t)))
    remaining = set(cut) - visited
    while remaining:
        start = min(remaining)
        cycle = {start}
        t = partner[cut[start]]
        while t != start:
            cycle.add(t)
            t = partner[cut[t]]
        cycle |= {cut[p] for p in cycle}
        loops.add(min(cycle))
        remaining -= cycle
    return wires, loops


def as_wperm(wires, loops) -> WPermutation:
    return WPermutation([tuple(sorted(w)) for w in wires] + [(p,) for p in loops])


def rand_injection(rng: random.Random, sources, targets, density=0.7) -> PartialInjection:
    sources = [p for p in sources if rng.random() < density]
    targets = list(targets)
    rng.shuffle(targets)
    return PartialInjection(zip(sources, targets))


def rand_wperm(rng: random.Random, ports) -> WPermutation:
    ports = list(ports)
    rng.shuffle(ports)
    orbits = []
    i = 0
    while i < len(ports):
        if i + 1 < len(ports) and rng.random() < 0.85:
            orbits.append((ports[i], ports[i + 1]))
            i += 2
        else:
            orbits.append((ports[i],))
            i += 1
    return WPermutation(orbits)


MLL = SymbolTable({"Par": 2, "Times": 2, "One": 0, "Deref": 1})


def rand_net(rng: random.Random, symbols: SymbolTable = MLL, max_cells=4, base=0) -> Net:
    """A validated random net: cells plus a random pairing of the ports."""
    next_port = base
    cells = []
    names = symbols.names()
    for _ in range(rng.randrange(max_cells + 1)):
        name = rng.choice(names)
        width = symbols.arity(name) + 1
        cells.append(Cell(name, tuple(range(next_port, next_port + width))))
        next_port += width
    pool = [p for c in cells for p in c.ports]
    extra = rng.randrange(4)
    pool.extend(range(next_port, next_port + extra))
    next_port += extra
    if len(pool) % 2:
        pool.append(next_port)
        next_port += 1
    rng.shuffle(pool)
    orbits = [(pool[i], pool[i + 1]) for i in range(0, len(pool), 2)]
    for _ in range(rng.randrange(2)):
        orbits.append((next_port,))
        next_port += 1
    return Net(WPermutation(orbits), cells)


def rand_acnet(rng: random.Random, symbols: SymbolTable = MLL, max_cells=2, base=0) -> ACNet:
    """A validated random AC net: random axioms, cuts between distinct axioms."""
    n_wires = rng.randrange(2, 8)
    axiom_orbits = [(base + 2 * i, base + 2 * i + 1) for i in range(n_wires)]
    next_port = base + 2 * n_wires
    # pick cut pairs whose endpoints sit on distinct axiom wires
    wire_of = {}
    for i, (p, q) in enumerate(axiom_orbits):
        wire_of[p] = i
        wire_of[q] = i
    candidates = [p for p, _ in axiom_orbits] + [q for _, q in axiom_orbits]
    rng.shuffle(candidates)
    cuts = []
    used = set()
    while len(candidates) >= 2:
        a = candidates.pop()
        if a in used or rng.random() < 0.4:
            continue
        for j, b in enumerate(candidates):
            if b not in used and wire_of[a] != wire_of[b]:
                cuts.append((a, b))
                used.update((a, b))
                del candidates[j]
                break
    free = [p for p in wire_of if p not in used]
    rng.shuffle(free)
    cells = []
    names = symbols.names()
    for _ in range(rng.randrange(max_cells + 1)):
        name = rng.choice(names)
        width = symbols.arity(name) + 1
        if len(free) < width:
            break
        cells.append(Cell(name, tuple(free.pop() for _ in range(width))))
    for _ in range(rng.randrange(2)):
        axiom_orbits.append((next_port,))
        next_port += 1
    return ACNet(WPermutation(axiom_orbits), WPermutation(cuts), cells)


def rand_cut(rng: random.Random, a: Net, b: Net, density=0.6) -> PartialInjection:
    """A random gluing injection between the free ports of two nets."""
    sources = sorted(a.free_ports)
    targets = sorted(b.free_ports)
    rng.shuffle(sources)
    rng.shuffle(targets)
    count = min(len(sources), len(targets))
    count = sum(1 for _ in range(count) if rng.random() < density)
    return PartialInjection(zip(sources[:count], targets[:count]))


# The Par/Times rule and the three-cell net of the multiplicative worked
# example, plus its one-step normal form.
PT_RULE = Rule(
    "Par",
    "Times",
    Context(Net(WPermutation([(10, 12), (11, 13)])), Interface((10, 11, 12, 13))),
)

DEREF_ONE_RULE = Rule(
    "Deref",
    "One",
    Context(Net(WPermutation([(10, 11)]), [Cell("One", (10,))]), Interface((11,))),
)


def mll_rules() -> RuleSet:
    return RuleSet([PT_RULE, DEREF_ONE_RULE])


MLL_NET = Net(
    WPermutation([(0, 3), (1, 2), (8, 4), (7, 5), (6, 9)]),
    [Cell("Par", (0, 1, 2)), Cell("Times", (3, 4, 5)), Cell("Times", (6, 7, 8))],
)

MLL_RESULT = Net(WPermutation([(6, 9), (7, 8)]), [Cell("Times", (6, 7, 8))])

MLL_TEXT = """\
symbol Par 2
symbol Times 2
rule Par Times {
  rhs {
    wire 10 12
    wire 11 13
  }
  interface 10 11 12 13
}
net main {
  wire 0 3
  wire 1 2
  wire 8 4
  wire 7 5
  wire 6 9
  cell Par 0 1 2
  cell Times 3 4 5
  cell Times 6 7 8
}
"""


def redex_chain(count: int) -> Net:
    """``count`` independent Par/Times redexes side by side."""
    orbits = []
    cells = []
    for k in range(count):
        b = 10 * k
        orbits.extend([(b, b + 3), (b + 6, b + 1), (b + 7, b + 2), (b + 8, b + 4), (b + 9, b + 5)])
        cells.append(Cell("Par", (b, b + 1, b + 2)))
        cells.append(Cell("Times", (b + 3, b + 4, b + 5)))
    return Net(WPermutation(orbits), cells)


def plant_redex(rng: random.Random, rules: RuleSet, symbols: SymbolTable = MLL, base=0) -> Net:
    """A random net containing exactly one Par/Times redex."""
    from permnet import match_redexes, parallel_sum

    while True:
        host = rand_net(rng, symbols, max_cells=3, base=base + 10)
        if not match_redexes(host, rules):
            break
    return parallel_sum(host, redex_chain(1))


def iso_fixing_free(a: Net, b: Net) -> bool:
    from permnet import find_isomorphism

    return find_isomorphism(a, b, fix_free_ports=True) is not None


def all_involutions(elems):
    """All w-permutation orbit lists over exactly the given ports."""
    elems = list(elems)
    if not elems:
        yield []
        return
    x, rest = elems[0], elems[1:]
    for tail in all_involutions(rest):
        yield [(x,)] + tail
    for i, y in enumerate(rest):
        for tail in all_involutions(rest[:i] + rest[i + 1 :]):
            yield [(x, y)] + tail


def all_injections(sources, targets):
    """All partial injections from a subset of sources into targets."""
    sources = list(sources)
    targets = list(targets)
    for k in range(min(len(sources), len(targets)) + 1):
        for dom in itertools.combinations(sources, k):
            for cod in itertools.permutations(targets, k):
                yield list(zip(dom, cod))
