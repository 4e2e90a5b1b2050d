"""TPDB SRS format: parsing, printing, round-trips."""

import pytest

from relsrs import (
    SrsDocument,
    SrsParseError,
    SrsRule,
    document_to_system,
    parse_srs,
    parse_system,
    print_srs,
    print_system,
    system_to_document,
)

REL = """(RULES
  a b -> a ,
  c ->= b c
)
"""


class TestParse:
    def test_strict_and_relative_rules(self):
        doc = parse_srs(REL)
        assert doc.rules == (
            SrsRule(("a", "b"), ("a",), True),
            SrsRule(("c",), ("b", "c"), False),
        )

    def test_alphabet_first_occurrence_order(self):
        assert parse_srs(REL).alphabet() == ("a", "b", "c")

    def test_empty_sides(self):
        doc = parse_srs("(RULES -> a, b ->= )")
        assert doc.rules[0].lhs == ()
        assert doc.rules[1].rhs == ()

    def test_single_line_whitespace_insensitive(self):
        assert parse_srs("(RULES  a   b  ->  a ,  c ->=  b c )") == parse_srs(REL)

    def test_arrow_must_be_its_own_token(self):
        with pytest.raises(SrsParseError):
            parse_srs("(RULES a b->a)")  # 'b->a' is a single token, not an arrow

    def test_other_sections_preserved(self):
        text = "(COMMENT relative ex.)\n" + REL
        doc = parse_srs(text)
        assert doc.other_sections == (("COMMENT", " relative ex."),)

    def test_nested_parens_in_other_section(self):
        doc = parse_srs("(COMMENT see (nested) note)" + REL)
        assert doc.other_sections[0][1] == " see (nested) note"

    def test_multiword_tokens(self):
        doc = parse_srs("(RULES f10 f2 -> f2)")
        assert doc.rules[0].lhs == ("f10", "f2")


class TestParseErrors:
    def test_no_rules_section(self):
        with pytest.raises(SrsParseError):
            parse_srs("(COMMENT nothing here)")

    def test_multiple_rules_sections(self):
        with pytest.raises(SrsParseError) as e:
            parse_srs("(RULES a -> b)(RULES b -> a)")
        assert "multiple RULES" in str(e.value)

    def test_missing_arrow(self):
        with pytest.raises(SrsParseError) as e:
            parse_srs("(RULES a b)")
        assert "no -> or ->=" in str(e.value)

    def test_two_arrows(self):
        with pytest.raises(SrsParseError) as e:
            parse_srs("(RULES a -> b -> c)")
        assert e.value.line == 1
        assert "more than one arrow" in str(e.value)

    def test_stray_comma(self):
        with pytest.raises(SrsParseError) as e:
            parse_srs("(RULES a -> b ,, c -> d)")
        assert "stray comma" in str(e.value)

    def test_unbalanced_paren(self):
        with pytest.raises(SrsParseError):
            parse_srs("(RULES a -> b")

    def test_garbage_at_top_level(self):
        with pytest.raises(SrsParseError):
            parse_srs("RULES a -> b")

    def test_error_positions_are_one_based(self):
        with pytest.raises(SrsParseError) as e:
            parse_srs("(RULES\n  a b)")
        assert e.value.line == 2
        assert e.value.col >= 1


class TestPrint:
    def test_round_trip_is_stable(self):
        printed = print_srs(parse_srs(REL))
        assert printed == REL
        assert print_srs(parse_srs(printed)) == printed

    def test_normalizes_whitespace(self):
        printed = print_srs(parse_srs("(RULES  a   b -> a a , c ->=  b c )"))
        reparsed = print_srs(parse_srs(printed))
        assert printed == reparsed

    def test_other_sections_precede_rules(self):
        text = print_srs(parse_srs(REL + "(COMMENT x)"))
        assert text.startswith("(COMMENT x)")
        assert print_srs(parse_srs(text)) == text


class TestSystemBridge:
    def test_document_to_system_letter_indices(self):
        sys_ = document_to_system(parse_srs(REL))
        assert sys_.letters == ("a", "b", "c")
        assert sys_.rules[0].lhs == (0, 1)
        assert sys_.rules[1].rhs == (1, 2)
        assert sys_.rules[0].strict and not sys_.rules[1].strict

    def test_system_round_trip(self):
        sys_ = parse_system(REL)
        assert print_system(sys_) == REL
        assert parse_system(print_system(sys_)) == sys_

    def test_empty_word_prints_as_nothing(self):
        sys_ = parse_system("(RULES a -> , ->= a)")
        text = print_system(sys_)
        assert "a -> ," in text
        assert "->= a" in text
        assert parse_system(text) == sys_

    def test_unused_letters_dropped_by_bridge(self):
        # the alphabet is rebuilt from rule tokens on the way back out
        doc = system_to_document(parse_system(REL))
        assert doc.alphabet() == ("a", "b", "c")
