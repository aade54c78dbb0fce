"""Check how the RK4 step size affects a preset against the matrix-exponential oracle.

    python3 scripts/step_convergence.py [PRESET]
"""

import sys

import numpy as np

from timedcavity import build_generator, derive_couplings, evolve, initial_density, oracle_expm
from timedcavity.scenarios import get_preset

T = 5.0


def main(name="fig3"):
    for curve in get_preset(name).curves:
        c = derive_couplings(curve.config)
        L = build_generator(c, curve.config)
        rho0 = initial_density(c.phi)
        exact = oracle_expm(L, T, rho0)
        errs = []
        for dt in (4e-3, 2e-3, 1e-3, 5e-4):
            ts = evolve(rho0, L, T, dt=dt, stride=1, check=False)
            errs.append(np.max(np.abs(ts.rho[-1] - exact)))
        orders = [np.log2(a / b) for a, b in zip(errs, errs[1:])]
        print(f"{curve.label:22s} " + " ".join(f"{e:.2e}" for e in errs)
              + "   observed order " + " ".join(f"{o:.2f}" for o in orders))


if __name__ == "__main__":
    main(*sys.argv[1:2])
