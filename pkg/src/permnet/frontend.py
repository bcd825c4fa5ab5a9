"""Text format, DOT export and the command line interface.

The file format is a small token language: `symbol NAME ARITY`
declarations, `net NAME { ... }` blocks made of `wire`, `loop`, `cell`
and `cut` statements (a `cut` line makes the block an AC net), and
`rule NAME NAME { rhs { ... } interface P... }` blocks. `#` starts a
comment. Ports are arbitrary non-negative integers and are never
renumbered.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from .acnet import ACNet, ex_collapse, validate_ac
from .dynamics import Rule, RuleSet, match_redexes, normalize, validate_rule
from .dpo import find_occurrence, generalized_reduce, lift_rule
from .errors import DuplicateName, IllTyped, NetSyntaxError, PermNetError
from .glue import Context, Interface
from .net import Cell, Net, SymbolTable, validate
from .perm import WPermutation


@dataclass(eq=False)
class Document:
    """Parsed contents of one input file."""

    symbols: SymbolTable = field(default_factory=SymbolTable)
    nets: Dict[str, Union[Net, ACNet]] = field(default_factory=dict)
    rules: Dict[Tuple[str, str], Rule] = field(default_factory=dict)

    def rule_set(self) -> RuleSet:
        return RuleSet(self.rules.values())

    def __eq__(self, other):
        return (
            isinstance(other, Document)
            and self.symbols.items() == other.symbols.items()
            and self.nets == other.nets
            and self.rules == other.rules
        )


class _Token:
    __slots__ = ("text", "line", "column")

    def __init__(self, text, line, column):
        self.text = text
        self.line = line
        self.column = column


def _tokenize(text: str) -> List[_Token]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        col = 0
        while col < len(line):
            if line[col].isspace():
                col += 1
                continue
            start = col
            while col < len(line) and not line[col].isspace():
                col += 1
            out.append(_Token(line[start:col], lineno, start + 1))
    return out


class _Parser:
    def __init__(self, tokens: List[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, what: str) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            line = last.line if last else 1
            raise NetSyntaxError(f"unexpected end of input, expected {what}", line)
        self.pos += 1
        return tok

    def expect(self, literal: str):
        tok = self.next(f"'{literal}'")
        if tok.text != literal:
            raise NetSyntaxError(
                f"expected '{literal}', found '{tok.text}'", tok.line, tok.column
            )

    def port(self) -> int:
        tok = self.next("a port number")
        if not tok.text.isdigit():
            raise NetSyntaxError(
                f"expected a port number, found '{tok.text}'", tok.line, tok.column
            )
        return int(tok.text)

    def name(self, what: str) -> str:
        tok = self.next(what)
        if not tok.text[0].isalpha():
            raise NetSyntaxError(
                f"expected {what}, found '{tok.text}'", tok.line, tok.column
            )
        return tok.text


def _parse_net_body(p: _Parser):
    """Statements of a net-like block, up to the closing brace."""
    orbits = []
    cuts = []
    cells = []
    while True:
        tok = p.next("a net statement or '}'")
        if tok.text == "}":
            break
        if tok.text == "wire":
            orbits.append((p.port(), p.port()))
        elif tok.text == "loop":
            orbits.append((p.port(),))
        elif tok.text == "cut":
            cuts.append((p.port(), p.port()))
        elif tok.text == "cell":
            symbol = p.name("a symbol name")
            ports = [p.port()]
            while True:
                nxt = p.peek()
                if nxt is None or not nxt.text.isdigit():
                    break
                ports.append(p.port())
            cells.append(Cell(symbol, tuple(ports)))
        else:
            raise NetSyntaxError(
                f"unknown net statement '{tok.text}'", tok.line, tok.column
            )
    return orbits, cuts, cells


def parse(text: str) -> Document:
    doc = Document()
    p = _Parser(_tokenize(text))
    while p.peek() is not None:
        tok = p.next("a declaration")
        if tok.text == "symbol":
            name = p.name("a symbol name")
            arity_tok = p.next("an arity")
            if not arity_tok.text.isdigit():
                raise NetSyntaxError(
                    f"expected an arity, found '{arity_tok.text}'",
                    arity_tok.line,
                    arity_tok.column,
                )
            if name in doc.symbols:
                raise DuplicateName("symbol", name)
            doc.symbols.declare(name, int(arity_tok.text))
        elif tok.text == "net":
            name = p.name("a net name")
            if name in doc.nets:
                raise DuplicateName("net", name)
            p.expect("{")
            orbits, cuts, cells = _parse_net_body(p)
            if cuts:
                net = ACNet(WPermutation(orbits), WPermutation(cuts), cells)
                validate_ac(net, doc.symbols)
            else:
                net = Net(WPermutation(orbits), cells)
                validate(net, doc.symbols)
            doc.nets[name] = net
        elif tok.text == "rule":
            left = p.name("a symbol name")
            right = p.name("a symbol name")
            key = tuple(sorted((left, right)))
            if key in doc.rules:
                raise DuplicateName("rule", "/".join(key))
            p.expect("{")
            p.expect("rhs")
            p.expect("{")
            orbits, cuts, cells = _parse_net_body(p)
            if cuts:
                raise NetSyntaxError("cut is not allowed in a rule rhs", tok.line)
            p.expect("interface")
            ports = []
            while True:
                nxt = p.peek()
                if nxt is None or not nxt.text.isdigit():
                    break
                ports.append(p.port())
            p.expect("}")
            rhs = Net(WPermutation(orbits), cells)
            validate(rhs, doc.symbols)
            rule = Rule(left, right, Context(rhs, Interface(ports)))
            validate_rule(rule, doc.symbols)
            doc.rules[key] = rule
        else:
            raise NetSyntaxError(
                f"unknown declaration '{tok.text}'", tok.line, tok.column
            )
    return doc


def _net_body_lines(net: Union[Net, ACNet], indent: str) -> List[str]:
    if isinstance(net, ACNet):
        wiring, cuts, cells = net.axioms, net.cuts, net.cells
    else:
        wiring, cuts, cells = net.wiring, None, net.cells
    lines = []
    for orbit in wiring.orbits():
        if len(orbit) == 1:
            lines.append(f"{indent}loop {orbit[0]}")
        else:
            lines.append(f"{indent}wire {orbit[0]} {orbit[1]}")
    if cuts is not None:
        for orbit in cuts.orbits():
            lines.append(f"{indent}cut {orbit[0]} {orbit[1]}")
    for cell in sorted(cells, key=lambda c: c.ports):
        ports = " ".join(map(str, cell.ports))
        lines.append(f"{indent}cell {cell.symbol} {ports}")
    return lines


def print_document(doc: Document) -> str:
    lines = []
    for name, arity in doc.symbols.items():
        lines.append(f"symbol {name} {arity}")
    for name in sorted(doc.nets):
        lines.append(f"net {name} {{")
        lines.extend(_net_body_lines(doc.nets[name], "  "))
        lines.append("}")
    for key in sorted(doc.rules):
        rule = doc.rules[key]
        lines.append(f"rule {rule.left_symbol} {rule.right_symbol} {{")
        lines.append("  rhs {")
        lines.extend(_net_body_lines(rule.replacement.net, "    "))
        lines.append("  }")
        iface = " ".join(map(str, rule.replacement.interface))
        lines.append(f"  interface {iface}".rstrip())
        lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")


def _format_net_block(name: str, net: Union[Net, ACNet]) -> str:
    return "\n".join([f"net {name} {{"] + _net_body_lines(net, "  ") + ["}"]) + "\n"


def to_dot(net: Union[Net, ACNet]) -> str:
    """Render a net for graphviz; shape is documented, bytes are not."""
    if isinstance(net, ACNet):
        wires = net.axioms.wires
        loops = net.axioms.loops
        cut_wires = net.cuts.wires
        port_nodes = net.carrier - net.cell_ports - loops
    else:
        wires = net.wiring.wires
        loops = net.wiring.loops
        cut_wires = frozenset()
        port_nodes = net.free_ports

    owner = {}
    principal = set()
    lines = ["graph net {"]
    for cell in sorted(net.cells, key=lambda c: c.ports):
        node = f"cell_{cell.principal}"
        lines.append(f'  {node} [shape=triangle, label="{cell.symbol}@{cell.principal}"];')
        for p in cell.ports:
            owner[p] = node
        principal.add(cell.principal)
    for p in sorted(port_nodes):
        owner[p] = f"port_{p}"
        lines.append(f'  port_{p} [shape=circle, label="{p}"];')
    for p in sorted(loops):
        lines.append(f'  loop_{p} [shape=point, label=""];')
        lines.append(f"  loop_{p} -- loop_{p};")
    for wire in sorted(wires, key=min):
        p, q = sorted(wire)
        mark = ", penwidth=2" if p in principal and q in principal else ""
        lines.append(
            f'  {owner[p]} -- {owner[q]} [taillabel="{p}", headlabel="{q}"{mark}];'
        )
    for wire in sorted(cut_wires, key=min):
        p, q = sorted(wire)
        for _ in range(2):
            lines.append(
                f'  {owner[p]} -- {owner[q]} [taillabel="{p}", headlabel="{q}", style=dashed];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _select_net(doc: Document, name: Optional[str]) -> Tuple[str, Union[Net, ACNet]]:
    if name is not None:
        if name not in doc.nets:
            raise IllTyped(f"no net named {name!r}")
        return name, doc.nets[name]
    if "main" in doc.nets:
        return "main", doc.nets["main"]
    if len(doc.nets) == 1:
        return next(iter(doc.nets.items()))
    raise IllTyped("file has no unambiguous net; use --net NAME")


def _write_dot(directory: str, step: int, net: Net):
    path = os.path.join(directory, "step_%04d.dot" % step)
    with open(path, "w") as handle:
        handle.write(to_dot(net))


def _reduce_dpo(net: Net, doc: Document, args, out) -> Net:
    rng = random.Random(args.seed)
    rules = doc.rule_set()
    lifted = {}
    steps = 0
    while steps < args.max_steps:
        matches = match_redexes(net, rules)
        if not matches:
            break
        if args.strategy == "leftmost":
            pair, rule = matches[0]
        else:
            pair, rule = matches[rng.randrange(len(matches))]
        if rule.symbol_pair not in lifted:
            lifted[rule.symbol_pair] = lift_rule(rule, doc.symbols)
        occurrence = find_occurrence(net, pair, rule, doc.symbols)
        net = generalized_reduce(net, lifted[rule.symbol_pair], occurrence)
        steps += 1
        if args.trace:
            wire = tuple(sorted(pair.wire))
            print(
                f"step {steps}: wire {wire[0]}-{wire[1]} "
                f"rule {rule.left_symbol}/{rule.right_symbol}",
                file=out,
            )
        if args.dot_dir:
            _write_dot(args.dot_dir, steps, net)
    return net


def _cmd_reduce(args, out) -> int:
    with open(args.file) as handle:
        doc = parse(handle.read())
    name, net = _select_net(doc, args.net)
    if isinstance(net, ACNet):
        raise IllTyped(f"net {name!r} is an AC net; collapse it first")
    if args.dot_dir:
        os.makedirs(args.dot_dir, exist_ok=True)
        _write_dot(args.dot_dir, 0, net)
    if args.engine == "dpo":
        result = _reduce_dpo(net, doc, args, out)
    else:
        def trace(step, wire, rule, engine):
            if args.trace:
                p, q = sorted(wire)
                print(
                    f"step {step}: wire {p}-{q} "
                    f"rule {rule.left_symbol}/{rule.right_symbol}",
                    file=out,
                )
            if args.dot_dir:
                _write_dot(args.dot_dir, step, engine.to_net())

        result, _, _ = normalize(
            net,
            doc.rule_set(),
            strategy=args.strategy,
            max_steps=args.max_steps,
            seed=args.seed,
            trace=trace,
        )
    out.write(_format_net_block(name, result))
    return 0


def _cmd_check(args, out) -> int:
    with open(args.file) as handle:
        parse(handle.read())
    return 0


def _cmd_collapse(args, out) -> int:
    with open(args.file) as handle:
        doc = parse(handle.read())
    name, net = _select_net(doc, args.net)
    if not isinstance(net, ACNet):
        raise IllTyped(f"net {name!r} has no cuts; collapse expects an AC net")
    out.write(_format_net_block(name, ex_collapse(net)))
    return 0


def _build_argparser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="permnet")
    sub = top.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="validate every block of a file")
    check.add_argument("file")
    check.set_defaults(run=_cmd_check)

    reduce_ = sub.add_parser("reduce", help="reduce a net to normal form")
    reduce_.add_argument("file")
    reduce_.add_argument("--net")
    reduce_.add_argument("--max-steps", type=int, default=10**6)
    reduce_.add_argument("--strategy", choices=("leftmost", "random"), default="leftmost")
    reduce_.add_argument("--seed", type=int)
    reduce_.add_argument("--trace", action="store_true")
    reduce_.add_argument("--dot-dir")
    reduce_.add_argument("--engine", choices=("direct", "dpo"), default="direct")
    reduce_.set_defaults(run=_cmd_reduce)

    collapse = sub.add_parser("collapse", help="Ex-collapse an AC net")
    collapse.add_argument("file")
    collapse.add_argument("--net")
    collapse.set_defaults(run=_cmd_collapse)
    return top


def main(argv=None) -> int:
    args = _build_argparser().parse_args(argv)
    try:
        return args.run(args, sys.stdout)
    except (PermNetError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
