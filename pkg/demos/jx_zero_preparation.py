"""One pulse pair turns N blockaded atoms into a collective Jx = 0 state.

All atoms start in |1>.  The blockade admits at most one shared Rydberg
excitation, so the collective dynamics reduce to a beam-splitter coupling
between the two lower levels plus an exchange coupling to the single
excitation - and the permanent zero mode of that Hamiltonian ends, after the
sweep, in the Jx = 0 eigenstate:

* N even: the Jx = 0 state of all N atoms, no Rydberg excitation at all;
* N odd:  one symmetrically shared Rydberg excitation on top of the Jx = 0
  state of the remaining N - 1 atoms.

The final Rydberg population is therefore a parity meter for the atom number.
Larger ensembles sweep through a denser level structure, so the drive
strength is raised with N to stay adiabatic at fixed pulse width.
"""

import math

from rydstirap import StirapParams, prepare_jx_zero

print(" N  Omega(MHz)  fidelity   Rydberg population")
for n, omega in ((2, 10), (3, 10), (4, 20), (5, 20), (6, 30)):
    params = StirapParams(
        omega_1_mhz=omega,
        omega_r_mhz=omega,
        sigma_us=5.0,
        tau_r_us=math.inf,
        r_max=1,
    )
    res = prepare_jx_zero(n, params)
    tag = "even -> empty" if n % 2 == 0 else "odd  -> one shared excitation"
    print(f"{n:2d}  {omega:8.0f}    {res.fidelity:.5f}    {res.rydberg_population:.5f}   ({tag})")

print("\nthe Jx = 0 state saturates the Heisenberg limit of phase sensitivity,")
print("making this a one-pulse-pair recipe for a metrology resource state.")
