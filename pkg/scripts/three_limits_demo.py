#!/usr/bin/env python3
"""Show the three roads to the same Zeno dynamics on the 4-level chain.

Frequent measurements, fast unitary kicks, and a strong continuous
coupling all freeze the b-c transition and leave the same effective
Hamiltonian acting inside the protected (a, b) sector.
"""

import argparse

import numpy as np

from zenosim import (
    convergence_curve,
    evolve_projective,
    evolve_zeno_limit,
    four_level_continuous,
    four_level_kicked,
    frobenius,
    subspace_probabilities,
    three_level_projective,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--t", type=float, default=1.0, help="total time")
    parser.add_argument("--max-n", type=int, default=1024,
                        help="largest kick/measurement count (power of two)")
    args = parser.parse_args()

    b_meas = three_level_projective()
    b_kick = four_level_kicked()
    b_coup = four_level_continuous()

    hz = b_meas.zeno_hamiltonian()
    gap_k = frobenius(b_kick.zeno_hamiltonian()[:3, :3] - hz)
    gap_c = frobenius(b_coup.zeno_hamiltonian()[:3, :3] - hz)
    print("effective Hamiltonian on the {a, b, c} block:")
    with np.printoptions(precision=3, suppress=True):
        print(hz.real)
    print(f"kicked model reproduces it to {gap_k:.2e}, "
          f"continuous to {gap_c:.2e}")

    values = []
    v = 64
    while v <= args.max_n:
        values.append(v)
        v *= 2
    if len(values) < 3:
        parser.error("--max-n must be at least 256")

    curve_n = convergence_curve(b_kick, args.t, values)
    curve_k = convergence_curve(b_coup, args.t, [float(v) for v in values])
    print(f"\nextracted-limit distance at t={args.t:g}:")
    print(f"{'N or K':>8s} {'kicked':>12s} {'continuous':>12s}")
    for v, dn, dk in zip(values, curve_n.distances, curve_k.distances):
        print(f"{v:8d} {dn:12.3e} {dk:12.3e}")
    print(f"fitted rates: kicked {curve_n.fitted_rate:.3f}, "
          f"continuous {curve_k.fitted_rate:.3f} (first order is -1)")

    # measurements: sector populations freeze as N grows
    psi = np.zeros(3, dtype=complex)
    psi[1] = 1.0
    rho0 = np.outer(psi, psi.conj())
    limit = evolve_zeno_limit(rho0, b_meas.H, b_meas.res, args.t,
                              samples=2).final_state
    print(f"\nmeasured chain, start in |b>, p(sector 1) at t={args.t:g}:")
    for n in (4, 16, 64, 256):
        fin = evolve_projective(rho0, b_meas.H, b_meas.res, args.t, n,
                                samples=2).final_state
        p = subspace_probabilities(fin, b_meas.res)[0]
        print(f"  N={n:4d}: {p:.6f}   (gap to limit {frobenius(fin - limit):.2e})")
    p_lim = subspace_probabilities(limit, b_meas.res)[0]
    print(f"  limit : {p_lim:.6f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
