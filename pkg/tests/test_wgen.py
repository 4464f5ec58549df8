"""Column-determinant generators, their closedness, structure and Miura image."""

import pytest

from svw import symbols as sy
from svw import wgen
from svw.brst import Complex, jgen
from svw.expression import Expression
from svw.exprio import to_text


def J(i, j, d=0):
    return Expression.gen(jgen(i, j, d))


# -- chains --------------------------------------------------------------------------

@pytest.mark.published
def test_chains_rank_one():
    got = {tuple(ch) for ch in wgen.cdet_chains(1)}
    assert got == {((3, 1),), ((1, 1), (3, 2)), ((2, 1), (3, 3)), ((1, 1), (2, 2), (3, 3))}


@pytest.mark.trivial
@pytest.mark.parametrize("n", [1, 2, 3])
def test_chain_count(n):
    chains = wgen.cdet_chains(n)
    assert len(chains) == 4 ** n
    assert len(set(chains)) == len(chains)


@pytest.mark.derived
def test_chains_match_brute_force_column_determinant():
    """Nonzero terms of the ordered expansion of an upper-Hessenberg-like operator matrix."""
    import itertools
    m = 5
    brute = set()
    for perm in itertools.permutations(range(1, m + 1)):
        entries = [(perm[c - 1], c) for c in range(1, m + 1)]
        # an entry A_{i,j} survives only for i >= j or i = j - 1 (the -1 on the superdiagonal)
        if all(i >= j - 1 for (i, j) in entries):
            brute.add(tuple(sorted((i, j) for (i, j) in entries if i >= j)))
    ours = {tuple(sorted(ch)) for ch in wgen.cdet_chains(2)}
    assert ours == brute


# -- extraction ---------------------------------------------------------------------------

@pytest.mark.published
def test_rank_one_generators_match_worked_example(M1, W1):
    gold = wgen.golden_n1(M1)
    for p in range(4):
        assert W1[p] == gold[p], p


@pytest.mark.published
def test_rank_one_W2_text(W1):
    assert to_text(W1[2]) == "1*k^2*J[1,1] + 1*k^2*J[2,2] + 1*k^2*J[3,3]"


@pytest.mark.published
def test_rank_one_W1_by_hand(M1, W1):
    e = M1.engine
    want = (-(e.nomul(J(1, 1), J(2, 2)) + e.nomul(J(1, 1), J(3, 3)) + e.nomul(J(2, 2), J(3, 3))
              + J(2, 1) - J(3, 2) + J(2, 2, 1).kmul(1))).kmul(1)
    assert W1[1] == want


@pytest.mark.derived
@pytest.mark.parametrize("fx", ["M1", "M2"])
def test_dummy_extraction_is_sound(fx, request):
    M = request.getfixturevalue(fx)
    W = wgen.extract_W(M)
    assert wgen.attach_dummy(W) == wgen.cdet_apply_dummy(M)
    assert wgen.split_dummy(wgen.attach_dummy(W)) == {p: X for p, X in enumerate(W) if X}


@pytest.mark.trivial
def test_split_dummy_rejects_dummy_free_terms():
    with pytest.raises(ValueError):
        wgen.split_dummy(J(1, 1))


@pytest.mark.derived
def test_parallel_extraction_matches_serial(M2, W2):
    assert wgen.extract_W(M2, workers=3) == W2


# -- closedness ----------------------------------------------------------------------------

@pytest.mark.derived
@pytest.mark.parametrize("fx, wx", [("M1", "W1"), ("M2", "W2")])
def test_W_are_Q_closed(fx, wx, request):
    rep = wgen.check_closed(request.getfixturevalue(fx), request.getfixturevalue(wx))
    assert rep.ok, rep.lines


@pytest.mark.derived
def test_closedness_check_catches_a_perturbation(M1, W1):
    bad = list(W1)
    bad[1] = bad[1] + J(2, 1)
    assert not wgen.check_closed(M1, bad).ok


@pytest.mark.trivial
def test_top_generator_is_a_scalar(W1, W2):
    assert W1[3] == Expression.vacuum(1, 3)
    assert W2[5] == Expression.vacuum(1, 5)


# -- structure -----------------------------------------------------------------------------

@pytest.mark.derived
@pytest.mark.parametrize("n, wx", [(1, "W1"), (2, "W2")])
def test_weights(n, wx, request):
    rep = wgen.check_weights(n, request.getfixturevalue(wx))
    assert rep.ok, rep.lines


@pytest.mark.derived
@pytest.mark.parametrize("n, wx", [(1, "W1"), (2, "W2")])
def test_leading_terms_and_filtration(n, wx, request):
    rep = wgen.leading_terms(n, request.getfixturevalue(wx))
    assert rep.ok, rep.lines


@pytest.mark.published
def test_linear_parts_rank_one(W1):
    assert wgen.linear_part(W1[1]) == (J(3, 2) - J(2, 1)).kmul(1)
    assert wgen.linear_part(W1[2]) == (J(1, 1) + J(2, 2) + J(3, 3)).kmul(2)
    assert wgen.linear_part(W1[0]) == J(3, 1)


@pytest.mark.derived
def test_expected_linear_rank_two():
    got = wgen.expected_linear(2, 1)
    want = (J(2, 1) * -1 + J(3, 2) - J(4, 3) + J(5, 4)).kmul(3)
    assert got == want


# -- Miura -----------------------------------------------------------------------------

@pytest.mark.trivial
def test_miura_keeps_diagonal_W2(W1):
    assert wgen.miura(W1[2]) == W1[2]


@pytest.mark.derived
def test_miura_of_W1_rank_one(M1, W1):
    e = M1.engine
    want = (-(e.nomul(J(1, 1), J(2, 2)) + e.nomul(J(1, 1), J(3, 3)) + e.nomul(J(2, 2), J(3, 3))
              + J(2, 2, 1).kmul(1))).kmul(1)
    assert wgen.miura(W1[1]) == want


@pytest.mark.derived
@pytest.mark.parametrize("fx, wx", [("M1", "W1"), ("M2", "W2")])
def test_miura_factorization(fx, wx, request):
    rep = wgen.miura_check(request.getfixturevalue(fx), request.getfixturevalue(wx))
    assert rep.ok, rep.lines


@pytest.mark.derived
def test_miura_drops_off_diagonal_and_charged_monomials():
    X = J(1, 1) + J(2, 1) + Expression.word((jgen(1, 1), sy.gen(sy.PHIU, 1, 2)))
    assert wgen.miura(X) == J(1, 1)


# -- rank three (beyond the required sizes) ------------------------------------------------

@pytest.mark.slow
@pytest.mark.derived
def test_rank_three_generators_are_closed_and_structured():
    M = Complex(3).minus
    W = wgen.extract_W(M, workers=wgen.default_workers())
    for rep in (wgen.check_closed(M, W), wgen.check_weights(3, W), wgen.leading_terms(3, W),
                wgen.miura_check(M, W)):
        assert rep.ok, rep.lines


@pytest.mark.derived
def test_modes_coincide_at_rank_one(W1):
    assert wgen.extract_W(Complex(1, "rescaled").minus) == W1
