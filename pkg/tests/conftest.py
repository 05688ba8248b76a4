import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)


@pytest.fixture(scope="session", autouse=True)
def _warm_compiled_kernels():
    # load (or build) the compiled stepper once so timed tests measure physics,
    # not JIT compilation
    from rydstirap.core import StateVector
    from rydstirap.models import SingleAtomModel
    from rydstirap.propagator import IntegratorConfig, propagate
    from rydstirap.pulses import stirap_schedule

    sched = stirap_schedule(1.0, 1.0, 0.5, 0.3)
    model = SingleAtomModel(sched)
    psi0 = StateVector(model.basis(), np.array([1.0, 0, 0], dtype=complex))
    propagate(model, psi0, IntegratorConfig(sample_interval=0.4))
