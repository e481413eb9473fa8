"""The K = {2,3} rational extension end to end: combinatorics, potential,
ladder operators, generating function and a few numeric checks."""
from ecstates.coherent import annihilator_numeric_residual, ecs, gen_fn
from ecstates.hermite import exceptional_hermite, normalized_pw
from ecstates.partition_maya import (
    MayaDiagram,
    bound_state_indices,
    critical_degrees,
    partition_from_maya,
    threshold_degree,
)
from ecstates.rational_ext import gamma, kernel_indices, ladder, potential_display
from ecstates.schur_vertex import schur


def main():
    M = MayaDiagram.from_index_set([2, 3])
    lam = partition_from_maya(M)
    print(f"M = {M}   lambda = {lam.parts}   sigma = {M.index}")
    print(f"S_lambda = {schur(lam).render()}")
    print(f"q_c = {threshold_degree(lam)}   critical degrees <= 8: {sorted(critical_degrees(lam, 8))}")
    print(f"H_M = {normalized_pw(M).render()}")
    print(f"U_M = {potential_display(M)}")
    bound = bound_state_indices(M, 6)
    for m in bound:
        print(f"  m = {m:2d}  E = {2 * m + 1:3d}  H_(M,m) = {exceptional_hermite(M, m).render()}")
    for q in range(4, 8):
        L = ladder(M, q)
        print(f"L_{q}: order {L.order}, kernel {list(kernel_indices(M, q))}, "
              f"gamma(m=6) = {gamma(M, q, 6)}")
    print(f"Psi_lambda prefactor = {gen_fn(lam, M.index).prefactor.render()}")
    state = ecs(lam, 4.0, M.index)
    for q in (4, 5):
        r, s = annihilator_numeric_residual(state, q, 0.7, 0.4)
        print(f"|L_{q} Phi - alpha^{q} e^(-2iqt) Phi| / |alpha^{q} Phi| at x=0.7, t=0.4: {r / s:.2e}")


if __name__ == "__main__":
    main()
