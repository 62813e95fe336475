import pytest
from sympy import primerange

from hypmod.paley import (PaleyError, QuadRep43, a_p_weight2, a_p_weight3, build_graph, cor74_k4,
                          cornacchia_43, cornacchia_43_search, count_k3, count_k4, count_k4_naive,
                          epsh_k4, hp_dm33, k4_g3_formula, prime_power_c, triple_oracle,
                          two_squares_even_y)

P1MOD4 = [p for p in primerange(5, 120) if p % 4 == 1]
P1MOD6 = [p for p in primerange(7, 120) if p % 6 == 1]


def test_build_graph_errors():
    for q, k in ((15, 2), (7, 2), (13, 1), (11, 3), (9, 2)):
        with pytest.raises(PaleyError):
            build_graph(q, k)


@pytest.mark.parametrize("q, k", [(13, 2), (13, 3), (37, 3), (41, 4), (61, 6), (41, 2)])
def test_graph_is_regular_and_undirected(q, k):
    g = build_graph(q, k)
    assert g.degree == (q - 1) // k
    assert all(row.bit_count() == g.degree for row in g.adjacency)
    assert g.edge_count() == q * (q - 1) // (2 * k)
    assert all(g.has_edge(b, a) for a in range(q) for b in g.neighbours(a))
    assert not any(g.has_edge(a, a) for a in range(q))
    assert all(pow(b - a, (q - 1) // k, q) == 1 for a in range(q) for b in g.neighbours(a))


@pytest.mark.parametrize("q, k", [(13, 2), (17, 2), (29, 2), (13, 3), (19, 3), (37, 3), (41, 4)])
def test_k4_against_naive(q, k):
    g = build_graph(q, k)
    assert count_k4(g) == count_k4_naive(g)


def test_known_counts():
    assert count_k4(build_graph(29, 2)) == 203
    assert count_k4(build_graph(17, 2)) == 0  # R(4, 4) = 18
    assert count_k3(build_graph(5, 2)) == 0
    # Paley graph P13: each edge in (q-5)/4 triangles
    assert count_k3(build_graph(13, 2)) == 13 * 6 // 2 * 2 // 3


@pytest.mark.parametrize("p", P1MOD4)
def test_epsh_formula(p):
    x, y = two_squares_even_y(p)
    assert x * x + y * y == p and y % 2 == 0
    assert epsh_k4(p) == count_k4(build_graph(p, 2))


@pytest.mark.parametrize("q", P1MOD6)
def test_cornacchia_normalisation(q):
    rep = cornacchia_43(q)
    assert 4 * q == rep.c ** 2 + 3 * rep.d ** 2
    assert rep.c % 3 == 1 and rep.d % 3 == 0 and rep.d >= 0
    assert cornacchia_43_search(q) == [rep]


def test_cornacchia_examples_and_errors():
    assert (cornacchia_43(13).c, cornacchia_43(13).d) == (-5, 3)
    assert (cornacchia_43(7).c, cornacchia_43(7).d) == (1, 3)
    with pytest.raises(PaleyError):
        cornacchia_43(11)
    with pytest.raises(ValueError):
        QuadRep43(7, 1, 1)


@pytest.mark.parametrize("p", P1MOD6)
def test_triple_oracle_k3(p):
    rep = triple_oracle(p, 3)
    assert rep.agree, rep
    assert rep.c == -a_p_weight2(p) and rep.H == a_p_weight3(p) == hp_dm33(p)


@pytest.mark.parametrize("p", P1MOD6[:6])
def test_formulas_are_the_same_polynomial(p):
    c, H = cornacchia_43(p).c, hp_dm33(p)
    assert cor74_k4(p, -c, H) == k4_g3_formula(p, c, H)
    # the count is sensitive to H
    assert k4_g3_formula(p, c, H + 1) != count_k4(build_graph(p, 3))


def test_prime_power_c():
    assert prime_power_c(2, 2) == 4
    assert prime_power_c(5, 2) == 10
    assert prime_power_c(2, 4) == -8
    with pytest.raises(PaleyError):
        prime_power_c(7, 2)
    with pytest.raises(PaleyError):
        prime_power_c(5, 3)


def test_report_json():
    d = triple_oracle(13, 3).to_json()
    assert list(d) == ["q", "k", "k3", "k4", "formula_k4", "c", "d", "H", "agree"]
    assert triple_oracle(13, 2).to_json()["c"] is None
    with pytest.raises(PaleyError):
        triple_oracle(37, 4)
