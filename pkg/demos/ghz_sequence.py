"""From a spin-coherent state to a GHZ superposition, atom-number parity doing
the work.

Prepare every atom in (|0> + |1>)/sqrt2.  The drives only see the |1>
component, and each |n0, n1> sector independently runs the double passage:
out to the collective state with n1-parity-dependent Rydberg occupation,
phase kick i on anything holding a Rydberg excitation, and back.  Odd-n1
sectors return with an extra i, even sectors with 1, and the binomial sum
recombines into the two-branch GHZ superposition

    e^{i pi/4}/sqrt2 ((|0>+|1>)/sqrt2)^N + e^{-i pi/4}/sqrt2 ((|0>-|1>)/sqrt2)^N.

With a perfect blockade (at most one Rydberg excitation) this works
essentially perfectly once the sweep is adiabatic; as in the Jx = 0 demo the
drive is raised with N to keep it so.  The second half of the script shows
the spoiler: keeping doubly excited states, their interaction shift makes the
dark level slightly non-zero, and the accumulated dynamic phase differs from
sector to sector even though every sector still returns with high population.
"""

import math

import numpy as np

from rydstirap import StirapParams, ghz_protocol


def params(omega_mhz, r_max=1, e_mhz=0.0):
    return StirapParams(
        omega_1_mhz=omega_mhz,
        omega_r_mhz=omega_mhz,
        sigma_us=5.0,
        tau_r_us=math.inf,
        r_max=r_max,
        interaction_mhz=e_mhz,
        delta_T_us=1.0,
    )


print("perfect blockade (at most one Rydberg excitation):")
for n_atoms, omega in ((2, 10), (4, 20), (6, 30)):
    res = ghz_protocol(n_atoms, params(omega))
    print(f"  N = {n_atoms} (Omega = {omega} MHz): GHZ population {res.ghz_population:.6f}, "
          f"branch populations {res.branch_populations[0]:.4f} / {res.branch_populations[1]:.4f}")

res = ghz_protocol(6, params(30))
print("\nsector returns for N = 6 (magnitude, phase vs the parity rule):")
for n1, r in enumerate(res.sector_returns):
    eta = 0.0 if n1 % 2 == 0 else np.pi / 2
    print(f"  n1 = {n1}: |r| = {abs(r):.5f}, arg = {np.angle(r):+.4f} "
          f"(parity phase {eta:+.4f})")

print("\nsame run but keeping doubly excited states (pair shift 400 MHz):")
res2 = ghz_protocol(6, params(30, r_max=2, e_mhz=400.0))
for n1, r in enumerate(res2.sector_returns):
    eta = 0.0 if n1 % 2 == 0 else np.pi / 2
    residual = np.angle(r * np.exp(-1j * eta))
    print(f"  n1 = {n1}: |r| = {abs(r):.5f}, phase residual = {residual:+.4f} rad")
print(f"GHZ population drops to {res2.ghz_population:.4f}: the interaction-shifted")
print("double-excitation manifold imprints a dynamic phase that grows nonlinearly")
print("with n1, so the binomial sum loses coherence even though every sector")
print(f"returns with population >= {min(abs(r)**2 for r in res2.sector_returns):.4f}.")
print("At wide benchmark pulses (sigma = 50 us) these residuals reach tens of")
print("radians and scramble the superposition entirely.")
