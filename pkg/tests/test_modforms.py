from fractions import Fraction

import pytest
from sympy import primerange

from hypmod.algebra import RadicalFieldElem
from hypmod.modforms import (FAMILY_IDS, HeckeInconsistency, OnoRejection, PUBLISHED_HECKE,
                             ap_coefficient, build_family, eigenform_complete,
                             family3_identity, hecke_matrix, hecke_members, hecke_tp,
                             kronecker, metadata_regression, minimal_level, n_k3, ono_check)
from hypmod.qseries import GRID, EtaQuotientSpec, QSeries, TruncationError, eta_quotient_expand

RF = RadicalFieldElem.parse


@pytest.mark.parametrize("spec, L, disc", [
    (EtaQuotientSpec(((2, 3), (6, 3))), 12, -3),
    (EtaQuotientSpec.k3(Fraction(1, 3), 3), 27, -3),
    (EtaQuotientSpec.k3(Fraction(1, 12), 12), 432, -1),
])
def test_ono_check_examples(spec, L, disc):
    form = ono_check(spec, L)
    assert (form.weight, form.character_disc, form.cuspidal) == (3, disc, True)
    assert minimal_level(spec).level == L


def test_ono_rejections_name_the_condition():
    with pytest.raises(OnoRejection) as e:
        ono_check(EtaQuotientSpec(((1, 3),)), 12)
    assert e.value.condition == 1
    with pytest.raises(OnoRejection) as e:
        ono_check(EtaQuotientSpec(((1, 2), (3, 2))), 12)
    assert e.value.condition == 2
    with pytest.raises(OnoRejection) as e:
        ono_check(EtaQuotientSpec(((1, -2), (3, 8))), 9)  # fails at some cusp
    assert e.value.condition in (2, 3)
    with pytest.raises(ValueError):
        ono_check(EtaQuotientSpec(((5, 2),)), 12)


def test_n_k3():
    assert [n_k3(Fraction(j, 12)) for j in (6, 5, 9)] == [2, 12, 4]
    with pytest.raises(ValueError):
        n_k3(Fraction(1, 5))
    with pytest.raises(ValueError):
        n_k3(1)


def test_metadata_rows():
    assert all(r.ok for r in metadata_regression())


def test_kronecker():
    assert [kronecker(-3, p) for p in (2, 3, 5, 7, 13)] == [-1, 0, -1, 1, 1]
    assert [kronecker(-4, p) for p in (2, 3, 5, 13)] == [0, -1, 1, 1]


def test_hecke_tp_linear_and_truncates():
    fam = build_family(5)
    f1, f5 = fam.member("1/12"), fam.member("5/12")
    a = hecke_tp(f1 * 2 + f5 * 3, 5, 3, -1, 40, 432)
    b = hecke_tp(f1, 5, 3, -1, 40, 432) * 2 + hecke_tp(f5, 5, 3, -1, 40, 432) * 3
    assert a.agrees_with(b)
    with pytest.raises(TruncationError):
        hecke_tp(f1.truncate(GRID * 100), 5, 3, -1, 40, 432)


@pytest.mark.parametrize("key", sorted(PUBLISHED_HECKE))
def test_published_matrices(key):
    fid, p = key
    assert hecke_matrix(build_family(fid), p) == PUBLISHED_HECKE[key]


def test_family5_operators_commute():
    fam = build_family(5)
    mats = {p: hecke_matrix(fam, p) for p in (5, 7, 11)}
    mm = lambda A, B: [[sum(A[i][k] * B[k][j] for k in range(4)) for j in range(4)] for i in range(4)]
    for p in mats:
        for q in mats:
            assert mm(mats[p], mats[q]) == mm(mats[q], mats[p])


def test_family_supports_are_disjoint():
    fam = build_family(5)
    for r, s in fam.members:
        j = int(12 * r)
        assert all(e // GRID % 12 == j for e, _ in s.terms())


def test_family3_is_flagged_and_rescaled():
    fam = build_family(3)
    assert not fam.galois and len(hecke_members(fam)) == 1
    assert family3_identity()
    assert minimal_level(EtaQuotientSpec.k3(Fraction(3, 4), 4)).level == 48


def test_default_completions():
    eig2 = eigenform_complete(build_family(2))
    assert dict(eig2.constants)[Fraction(2, 3)] == RF("3*sqrt(-1)")
    assert eig2.label == "27.3.b.b"
    eig5 = eigenform_complete(build_family(5))
    c = dict(eig5.constants)
    assert c[Fraction(11, 12)] == RF("-9*sqrt(-3)")
    assert c[Fraction(5, 12)] * c[Fraction(7, 12)] == c[Fraction(11, 12)] * 5
    eig1 = eigenform_complete(build_family(1))
    assert eig1.constants == [(Fraction(1, 2), RF("1"))]


def test_other_sign_choices_force_other_constants():
    eig = eigenform_complete(build_family(5), {"5/12": "-3*sqrt(5)"})
    assert dict(eig.constants)[Fraction(11, 12)] == RF("9*sqrt(-3)")
    with pytest.raises(HeckeInconsistency):
        eigenform_complete(build_family(5), {"5/12": "3*sqrt(5)", "11/12": "9*sqrt(-3)"})


def test_ap_examples():
    eig2 = eigenform_complete(build_family(2))
    direct = eta_quotient_expand(EtaQuotientSpec(((3, 5), (9, 1))), GRID * 10)
    a7 = ap_coefficient(eig2, 7)
    assert a7.is_integer() and a7 == RF(str(direct.coeff_q(7))) and abs(a7.to_rational()) <= 14
    assert ap_coefficient(eigenform_complete(build_family(1)), 5) == RF("0")
    assert ap_coefficient(eigenform_complete(build_family(5)), 13).is_integer()
    with pytest.raises(ValueError):
        ap_coefficient(eig2, 8)


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_ap_integral_and_deligne(fid):
    fam = build_family(fid)
    eig = eigenform_complete(fam)
    for p in primerange(5, 500):
        if (p - 1) % fam.modulus:
            continue
        a = ap_coefficient(eig, p)
        assert a.is_integer() and abs(a.to_rational()) <= 2 * p, (fid, p, a)


def test_family_json():
    data = build_family(2).to_json()
    assert data["eigen_label"] == "27.3.b.b"
    assert data["members"][0] == {"r": "1/3", "eta_spec": "eta(3t)^5 eta(9t)^1",
                                  "level": 27, "character": "chi_-3"}
    assert {"r": "2/3", "constant": "3*sqrt(-1)"} in data["completion"]
