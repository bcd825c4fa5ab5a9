"""Text format, DOT export and the command line interface."""

import pytest

from permnet import (
    ACNet,
    ArityMismatch,
    Cell,
    Document,
    DuplicateName,
    Net,
    NetSyntaxError,
    WPermutation,
    find_isomorphism,
    main,
    parse,
    print_document,
    to_dot,
)
from genutil import MLL_NET, MLL_RESULT, MLL_TEXT, PT_RULE


AC_TEXT = """\
symbol S 1
net main {
  wire 1 2
  wire 3 4
  wire 5 6
  cut 2 3
  cell S 4 5
}
"""


class TestParse:
    def test_mll_file(self):
        doc = parse(MLL_TEXT)
        assert doc.nets["main"] == MLL_NET
        assert doc.rules[("Par", "Times")] == PT_RULE
        assert doc.symbols.items() == [("Par", 2), ("Times", 2)]

    def test_empty_input(self):
        assert parse("") == Document()

    def test_comments_and_whitespace(self):
        text = "# a comment\nsymbol   One 0  # trailing\n\nnet main { loop 4 }\n"
        doc = parse(text)
        assert doc.nets["main"] == Net(WPermutation([(4,)]))

    def test_arity_mismatch(self):
        with pytest.raises(ArityMismatch):
            parse("symbol Par 2\nnet main { wire 0 1\ncell Par 0 1 }")

    def test_unknown_symbol(self):
        from permnet import UnknownSymbol

        with pytest.raises(UnknownSymbol):
            parse("net main { wire 0 1  wire 2 3  cell Par 0 1 2 }")

    def test_duplicate_symbol(self):
        with pytest.raises(DuplicateName):
            parse("symbol A 1\nsymbol A 2")

    def test_duplicate_net(self):
        with pytest.raises(DuplicateName):
            parse("net a { }\nnet a { }")

    def test_unknown_statement(self):
        with pytest.raises(NetSyntaxError) as info:
            parse("net a {\n  frob 1 2\n}")
        assert info.value.line == 2

    def test_bad_port(self):
        with pytest.raises(NetSyntaxError):
            parse("net a { wire x 2 }")

    def test_unexpected_eof(self):
        with pytest.raises(NetSyntaxError):
            parse("net a { wire 1 2")

    def test_cut_makes_ac_net(self):
        doc = parse(AC_TEXT)
        net = doc.nets["main"]
        assert isinstance(net, ACNet)
        assert net.cuts == WPermutation([(2, 3)])

    def test_cut_rejected_in_rhs(self):
        text = (
            "symbol A 0\nsymbol B 0\n"
            "rule A B { rhs { wire 1 2 cut 1 2 } interface }\n"
        )
        with pytest.raises(NetSyntaxError):
            parse(text)


class TestPrint:
    def test_round_trip_document(self):
        doc = parse(MLL_TEXT)
        assert parse(print_document(doc)) == doc

    def test_fixpoint_after_one_round(self):
        once = print_document(parse(MLL_TEXT))
        assert print_document(parse(once)) == once

    def test_empty_document(self):
        assert print_document(Document()) == ""

    def test_loop_line(self):
        doc = parse("net main { loop 7 }")
        assert "loop 7" in print_document(doc)

    def test_ac_round_trip(self):
        doc = parse(AC_TEXT)
        assert parse(print_document(doc)) == doc


class TestToDot:
    def test_mll_counts(self):
        dot = to_dot(MLL_NET)
        assert dot.count("shape=triangle") == 3
        assert dot.count("shape=circle") == 1
        assert dot.count(" -- ") == 5
        assert dot.count("penwidth=2") == 1

    def test_empty(self):
        assert to_dot(Net()) == "graph net {\n}\n"

    def test_loop_only(self):
        dot = to_dot(Net(WPermutation([(1,)])))
        assert dot.count(" -- ") == 1
        assert "loop_1 -- loop_1" in dot

    def test_ac_cut_doubled(self):
        dot = to_dot(parse(AC_TEXT).nets["main"])
        assert dot.count("style=dashed") == 2


class TestCli:
    def write(self, tmp_path, text, name="in.net"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    def test_check_ok(self, tmp_path):
        assert main(["check", self.write(tmp_path, MLL_TEXT)]) == 0

    def test_check_bad_file(self, tmp_path, capsys):
        bad = self.write(tmp_path, "symbol Par 2\nnet a { wire 0 1 cell Par 0 1 }")
        assert main(["check", bad]) == 1
        assert "error:" in capsys.readouterr().err

    def test_check_missing_file(self, tmp_path):
        assert main(["check", str(tmp_path / "nope.net")]) == 1

    def test_usage_error(self):
        with pytest.raises(SystemExit) as info:
            main(["frobnicate"])
        assert info.value.code == 2

    def test_reduce(self, tmp_path, capsys):
        assert main(["reduce", self.write(tmp_path, MLL_TEXT)]) == 0
        out = capsys.readouterr().out
        reduced = parse("symbol Par 2\nsymbol Times 2\n" + out).nets["main"]
        assert find_isomorphism(reduced, MLL_RESULT, fix_free_ports=True)

    def test_reduce_trace(self, tmp_path, capsys):
        main(["reduce", self.write(tmp_path, MLL_TEXT), "--trace"])
        out = capsys.readouterr().out
        assert "step 1: wire 0-3 rule Par/Times" in out

    def test_reduce_engines_agree(self, tmp_path, capsys):
        path = self.write(tmp_path, MLL_TEXT)
        main(["reduce", path, "--engine", "direct"])
        direct = capsys.readouterr().out
        main(["reduce", path, "--engine", "dpo"])
        dpo = capsys.readouterr().out
        header = "symbol Par 2\nsymbol Times 2\n"
        a = parse(header + direct).nets["main"]
        b = parse(header + dpo).nets["main"]
        assert find_isomorphism(a, b, fix_free_ports=True)

    def test_reduce_dot_dir(self, tmp_path, capsys):
        dot_dir = tmp_path / "dots"
        main(["reduce", self.write(tmp_path, MLL_TEXT), "--dot-dir", str(dot_dir)])
        capsys.readouterr()
        assert sorted(p.name for p in dot_dir.iterdir()) == [
            "step_0000.dot",
            "step_0001.dot",
        ]

    def test_reduce_rejects_ac_net(self, tmp_path, capsys):
        assert main(["reduce", self.write(tmp_path, AC_TEXT)]) == 1

    def test_collapse(self, tmp_path, capsys):
        assert main(["collapse", self.write(tmp_path, AC_TEXT)]) == 0
        out = capsys.readouterr().out
        collapsed = parse("symbol S 1\n" + out).nets["main"]
        assert collapsed == Net(
            WPermutation([(1, 4), (5, 6)]), [Cell("S", (4, 5))]
        )

    def test_collapse_requires_ac_net(self, tmp_path, capsys):
        assert main(["collapse", self.write(tmp_path, MLL_TEXT)]) == 1

    def test_net_selection(self, tmp_path, capsys):
        text = "net first { wire 1 2 }\nnet second { loop 3 }\n"
        path = self.write(tmp_path, text)
        assert main(["reduce", path]) == 1  # ambiguous
        capsys.readouterr()
        assert main(["reduce", path, "--net", "second"]) == 0
        assert "loop 3" in capsys.readouterr().out
