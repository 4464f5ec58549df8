"""Text and JSON round trips, parser diagnostics."""

import json
import random
from fractions import Fraction

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from svw import suites
from svw import symbols as sy
from svw.expression import Expression
from svw.exprio import (IndexRangeError, ParseError, lambda_to_text, parse, terms_from_json,
                        terms_json, to_text, wset_from_json, wset_to_json)
from svw.lca import cur

SCHEMA = {
    "type": "object",
    "required": ["n", "generators", "W"],
    "properties": {
        "n": {"type": "integer"},
        "generators": {"type": "array", "items": {"$ref": "#/$defs/factor"}},
        "W": {"type": "array", "items": {
            "type": "object", "required": ["p", "terms"],
            "properties": {
                "p": {"type": "integer"},
                "terms": {"type": "array", "items": {
                    "type": "object", "required": ["coeff", "word"],
                    "properties": {
                        "coeff": {"type": "object", "required": ["num", "den", "kpow"],
                                  "properties": {"num": {"type": "string", "pattern": "^-?[0-9]+$"},
                                                 "den": {"type": "string", "pattern": "^[0-9]+$"},
                                                 "kpow": {"type": "integer"}}},
                        "word": {"type": "array", "items": {"$ref": "#/$defs/factor"}}}}}}}}},
    "$defs": {"factor": {"type": "object", "required": ["gen", "i", "j", "d"],
                         "properties": {"gen": {"enum": ["J", "Cur", "Phi", "PhiD", "X"]},
                                        "i": {"type": "integer"}, "j": {"type": "integer"},
                                        "d": {"type": "integer"}}}},
}


def random_expression(C, rng):
    """A random sum of canonical monomials with rational coefficients and level powers."""
    acc = Expression()
    for _ in range(rng.randint(0, 5)):
        X = suites.random_monomial(C.engine, rng, C.generators(), 3, 3)
        c = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
        acc = acc + X.kmul(rng.randint(0, 4)) * c
    if rng.random() < 0.2:
        acc = acc + Expression.vacuum(Fraction(rng.randint(-5, 5), 3), rng.randint(0, 3))
    return acc


# -- printing ---------------------------------------------------------------------------

@pytest.mark.published
def test_print_rank_one_W2(W1):
    assert to_text(W1[2]) == "1*k^2*J[1,1] + 1*k^2*J[2,2] + 1*k^2*J[3,3]"


@pytest.mark.trivial
def test_print_zero_and_vacuum():
    assert to_text(Expression()) == "0"
    assert to_text(Expression.vacuum(-2, 1)) == "-2*k^1*1"


@pytest.mark.trivial
def test_lambda_lines(C1):
    P = C1.engine.bracket(Expression.gen(cur(1, 1)), Expression.gen(cur(1, 1)))
    assert lambda_to_text(P) == "(0,1): 1*k^1*1"


# -- parsing -------------------------------------------------------------------------------

@pytest.mark.trivial
def test_parse_vacuum():
    assert parse("1") == Expression.vacuum()
    assert parse("0") == Expression()


@pytest.mark.trivial
def test_parse_is_whitespace_tolerant():
    a = parse("-1/2*k^3*NO(J[1,1],S^2(J[3,2])) + 4*Phi[1,2]")
    b = parse("  - 1 / 2 * k^3 * NO( J[ 1 , 1 ] , S^2 ( J[3,2] ) )\n +4 * Phi[1,2] ")
    assert a == b
    assert parse("-1 * Phi[1,2]") == parse("-1*Phi[1,2]")


@pytest.mark.derived
def test_parse_with_engine_canonicalizes(C1):
    X = parse("NO(Cur[1,1],Cur[1,1])", n=1, engine=C1.engine)
    assert X.is_zero()
    Y = parse("NO(Phi[2,3],Phi[1,2])", n=1, engine=C1.engine)
    assert Y == C1.engine.nomul(Expression.gen(sy.gen(sy.PHIU, 2, 3)), Expression.gen(sy.gen(sy.PHIU, 1, 2)))


@pytest.mark.trivial
@pytest.mark.parametrize("text, line, col", [
    ("J[1,", 1, 5),
    ("J[1,1] +", 1, 9),
    ("Foo[1,1]", 1, 1),
    ("1*J[1,1]\n + 2*Q", 2, 6),
    ("J[1,1] J[2,2]", 1, 8),
    ("NO(J[1,1],J[2,1]", 1, 17),
    ("1/0*J[1,1]", 1, 1),
])
def test_parse_errors_carry_positions(text, line, col):
    with pytest.raises(ParseError) as err:
        parse(text, n=1)
    assert (err.value.line, err.value.col) == (line, col)
    assert f"line {line}, column {col}" in str(err.value)


@pytest.mark.trivial
@pytest.mark.parametrize("text", ["J[4,1]", "J[1,2]", "Phi[2,1]", "Phi[1,1]", "PhiD[3,3]",
                                  "Cur[0,1]", "NO(J[1,1],Cur[1,9])"])
def test_index_range_errors(text):
    with pytest.raises(IndexRangeError):
        parse(text, n=1)


@pytest.mark.trivial
def test_index_range_depends_on_rank():
    assert parse("J[5,1]", n=2) == Expression.gen(sy.gen(sy.J, 5, 1))


# -- round trips ---------------------------------------------------------------------------

@pytest.mark.derived
def test_text_round_trip_on_500_random_expressions(C2):
    rng = random.Random(2024)
    for _ in range(500):
        X = random_expression(C2, rng)
        assert parse(to_text(X), n=2) == X


@pytest.mark.derived
def test_json_round_trip_on_500_random_expressions(C2):
    rng = random.Random(99)
    for _ in range(500):
        X = random_expression(C2, rng)
        assert terms_from_json(json.loads(json.dumps(terms_json(X)))) == X


@given(st.integers(-10 ** 30, 10 ** 30), st.integers(1, 10 ** 20), st.integers(0, 9))
@settings(max_examples=200, deadline=None)
@pytest.mark.derived
def test_big_coefficients_round_trip(num, den, kp):
    X = Expression.gen(cur(2, 1), Fraction(num, den), kp)
    assert parse(to_text(X)) == X
    assert terms_from_json(terms_json(X)) == X


@pytest.mark.derived
@pytest.mark.parametrize("n, wx, mx", [(1, "W1", "M1"), (2, "W2", "M2")])
def test_wset_json_schema_and_round_trip(n, wx, mx, request):
    W, M = request.getfixturevalue(wx), request.getfixturevalue(mx)
    text = wset_to_json(n, W, M.jgens)
    doc = json.loads(text)
    jsonschema.validate(doc, SCHEMA)
    assert [f["gen"] for f in doc["generators"]] == ["J"] * len(M.jgens)
    assert wset_from_json(text) == (n, W)
