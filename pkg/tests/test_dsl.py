"""Parser and printer: grammar, precedence, errors, round trips."""

import random

import pytest

from degreecalc.dsl import ParseError, SemanticError, parse_expr, print_expr
from degreecalc.manifold import (
    CIRCLE,
    CircleBundle,
    ConnSum,
    Product,
    Surface,
    normalize,
)

from conftest import random_expr


def K(g, e):
    return CircleBundle(g, e)


class TestParse:
    def test_connected_sum(self):
        assert parse_expr("K(2;3) # K(2;4)") == ConnSum((K(2, 3), K(2, 4)))

    def test_sum_binds_tighter_than_product(self):
        expr = parse_expr("K(2;5) x K(2;7) # K(2;9)")
        assert expr == Product((K(2, 5), ConnSum((K(2, 7), K(2, 9)))))

    def test_atoms(self):
        assert parse_expr("S1") == CIRCLE
        assert parse_expr("S(0)") == Surface(0)
        assert parse_expr(" K( 3 ; -4 ) ") == K(3, -4)

    def test_parens(self):
        expr = parse_expr("(K(2;1) # K(2;2)) x S1")
        assert expr == Product((CIRCLE, ConnSum((K(2, 1), K(2, 2)))))

    def test_result_is_normalized(self):
        assert parse_expr("K(2;3) # K(2;1)") == ConnSum((K(2, 1), K(2, 3)))

    def test_low_genus_is_semantic_error(self):
        with pytest.raises(SemanticError):
            parse_expr("K(1;3)")

    def test_mixed_dimension_sum_is_semantic_error(self):
        with pytest.raises(SemanticError):
            parse_expr("S(2) # K(2;3)")

    def test_syntax_error_carries_position(self):
        with pytest.raises(ParseError) as err:
            parse_expr("K(2;3) # ")
        assert err.value.line == 1
        assert err.value.column == 10
        assert "K" in err.value.expected

    def test_missing_semicolon(self):
        with pytest.raises(ParseError) as err:
            parse_expr("K(2,3)")
        assert ";" in err.value.expected

    def test_unknown_name(self):
        with pytest.raises(ParseError):
            parse_expr("T(2;3)")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse_expr("S1 S1")

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_expr("   ")


class TestPrint:
    def test_sum(self):
        assert print_expr(ConnSum((K(2, 1), K(2, 3)))) == "K(2;1) # K(2;3)"

    def test_product(self):
        assert print_expr(Product((K(2, 2), K(2, 3)))) == "K(2;2) x K(2;3)"

    def test_product_inside_sum_is_parenthesized(self):
        expr = ConnSum((K(2, 1), Product((CIRCLE, Surface(2)))))
        text = print_expr(expr)
        assert text == "K(2;1) # (S1 x S(2))"
        assert parse_expr(text) == normalize(expr)

    def test_round_trip_on_random_expressions(self):
        rng = random.Random(11)
        for _ in range(1000):
            e = random_expr(rng)
            assert parse_expr(print_expr(e)) == normalize(e)

    def test_print_is_stable_under_normalize(self):
        rng = random.Random(12)
        for _ in range(200):
            e = random_expr(rng)
            assert print_expr(e) == print_expr(normalize(e))
