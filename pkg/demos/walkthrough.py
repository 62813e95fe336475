"""A short tour: one prime through the character sum, the eigenform it matches,
and the clique count the same numbers predict."""
from fractions import Fraction

from hypmod.charsums import CharacterTable, HyperDatum, hp, psi_twist
from hypmod.modforms import ap_coefficient, build_family, eigenform_complete, hecke_matrix
from hypmod.paley import build_graph, cornacchia_43, count_k4, triple_oracle
from hypmod.qseries import GRID, EtaQuotientSpec, eta_quotient_expand


def main():
    p = 37
    table = CharacterTable(p)

    spec = EtaQuotientSpec.k3(Fraction(1, 3), 3)
    print("K3(1/3) at 3tau:", eta_quotient_expand(spec, GRID * 8).to_text())

    fam = build_family(2)
    print("T_2 on family 2:", hecke_matrix(fam, 2))
    eig = eigenform_complete(fam)
    print("completion constants:", [(str(r), str(c)) for r, c in eig.constants])

    h = hp(HyperDatum.dm(3, 3), 1, table)
    psi = psi_twist(3, table)
    print(f"H_{p} = {h.value}, psi = {psi}, psi*H = {psi * h.value}")
    print(f"a_{p} = {ap_coefficient(eig, p)}")

    rep = cornacchia_43(p)
    print(f"4*{p} = ({rep.c})^2 + 3*{rep.d}^2")
    print("K4 in G_3(37):", count_k4(build_graph(p, 3)))
    print("closed form:", triple_oracle(p, 3).to_json())


if __name__ == "__main__":
    main()
