#!/usr/bin/env python3
"""
Example usage of the wasserstein_eigendist package.
This script walks a lazy random walk on a cycle through the main computations.
"""

from wasserstein_eigendist import (
    coupling_irreducible,
    extract_coupling,
    find_lumpable_partition,
    iterate_F,
    quotient_chain,
    symmetrize,
    verify_eigendistance,
)
from wasserstein_eigendist.concentration import concentration_params, function_tail_bound
from wasserstein_eigendist.coupling import simulate_coupled
from wasserstein_eigendist.eigendistance import result_from_metric
from wasserstein_eigendist.example_chains import kappa_L, lazy_torus, rho_L


def main():
    L, q = 8, 0.2
    chain = lazy_torus(L, q)
    rho = rho_L(L)

    print("=== Closed-form eigendistance ===")
    check = verify_eigendistance(chain, rho)
    print(f"kappa (measured): {check.kappa_hat:.12f}")
    print(f"kappa (formula):  {kappa_L(L, 1 - 2 * q):.12f}")
    print(f"residual:         {check.residual:.2e}")

    print("\n=== Fixed-point iteration from the discrete metric ===")
    result = iterate_F(chain)
    print(f"kappa: {result.kappa:.12f} after {result.iterations} iterations (converged: {result.converged})")

    print("\n=== Coupling operator ===")
    coupling = symmetrize(extract_coupling(chain, result_from_metric(chain, rho)))
    irreducible, classes = coupling_irreducible(coupling)
    print(f"irreducible: {irreducible} ({len(classes)} classes)")
    simulation = simulate_coupled(coupling, 0, L // 2, T=10, samples=5000, seed=1)
    print(f"E rho(X_10, Y_10): {simulation.mean_rho_p[-1]:.4f}")

    print("\n=== Lumpability ===")
    partition = find_lumpable_partition(chain)
    print(f"partition: {partition.blocks if partition is not None else None}")
    if partition is not None:
        print(quotient_chain(chain, partition).matrix)

    print("\n=== Concentration ===")
    f = rho.matrix[0]
    params = concentration_params(chain, rho, check.kappa_hat, f)
    for r in (1.0, 2.0, 4.0):
        print(f"P(f(X_20) - E f(X_20) > r): r={r} bound={function_tail_bound(params.lip_norm, params.J, check.kappa_hat, 20, r):.4f}")


if __name__ == "__main__":
    main()
