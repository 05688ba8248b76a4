"""Instantaneous energy levels of six blockaded atoms during the passage.

With at most one Rydberg excitation, every drive term flips the parity
(-1)^(n2), so the parity operator anti-commutes with the Hamiltonian: the 13
eigenvalues come in +/- pairs around an exact zero mode at every instant.
That permanent zero mode *is* the dark state the adiabatic transfer rides.

At the start (only the upper drive on) the levels are the exchange-ladder
pairs 0, +/- Omega_r sqrt(n2 + 1)/2; at the end (only the lower drive) they
are two interleaved equidistant ladders - one for no Rydberg excitation,
one for a single shared excitation.
"""

import numpy as np

from rydstirap import CollectiveModel, IntegratorConfig, instantaneous_spectrum, jx_eigenvalues
from rydstirap.pulses import stirap_schedule

OM = 2 * np.pi * 10.0  # 10 MHz peak Rabi frequency, angular

schedule = stirap_schedule(OM, OM, sigma=1.5, delta_t=1.1)
model = CollectiveModel(6, schedule, r_max=1)
scan = instantaneous_spectrum(model, IntegratorConfig(sample_interval=0.01))

print(f"{scan.track_count} eigenvalue tracks over {scan.times[-1]:.1f} us")
sym = np.max(np.abs(scan.eigenvalues + scan.eigenvalues[:, ::-1]))
zero = np.max(np.min(np.abs(scan.eigenvalues), axis=1))
print(f"spectrum symmetric about zero to {sym:.1e} rad/us")
print(f"zero mode present at every sample to {zero:.1e} rad/us")

t = 0.5  # before the lower pulse: exchange-ladder values
orr = float(schedule.omega_r(t))
analytic = sorted({0.0} | {s * 0.5 * orr * np.sqrt(n2 + 1) for n2 in range(6) for s in (1, -1)})
i = int(np.searchsorted(scan.times, t))
print(f"\nat t = {t} us (upper drive only), levels vs 0, +/- Omega_r sqrt(n2+1)/2:")
print("  numeric :", np.round(scan.eigenvalues[i], 3))
print("  analytic:", np.round(analytic, 3))

t = 3.5  # after the upper pulse: two interleaved equidistant ladders
om1 = float(schedule.omega_1(t))
ladders = np.sort(np.concatenate([jx_eigenvalues(6, om1), jx_eigenvalues(5, om1)]))
i = int(np.searchsorted(scan.times, t))
print(f"\nat t = {t} us (lower drive only), levels vs the equidistant ladders:")
print("  numeric :", np.round(scan.eigenvalues[i], 3))
print("  analytic:", np.round(ladders, 3))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(scan.times, scan.eigenvalues, color="k", lw=0.8)
    ax.set_xlabel("t (us)")
    ax.set_ylabel("eigenvalues of H(t) (rad/us)")
    fig.tight_layout()
    fig.savefig("collective_spectrum.png", dpi=150)
    print("\nwrote collective_spectrum.png")
except ImportError:
    pass
