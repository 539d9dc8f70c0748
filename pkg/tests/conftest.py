"""Shared dynamics fixtures: a PI-controlled double integrator with friction.

The front coupling is (1/3)(4s+4)/(s^2(s/3+1)) throughout. Three rear
couplings give the canonical comparison set: identical (symmetric), scaled by
2.5/4 (asymmetric in position and velocity), and (1/3)(2.5s+4)/(s^2(s/3+1))
(symmetric position, asymmetric velocity).
"""

import numpy as np
import pytest

from wavestring import AgentDynamics, Polynomial, RationalTF, tf_normalize


def front_coupling() -> RationalTF:
    return tf_normalize(
        Polynomial([4 / 3, 4 / 3]), Polynomial([0, 0, 1, 1 / 3])
    )


def rear_scaled(mu: float) -> RationalTF:
    mf = front_coupling()
    return RationalTF(mf.num.scaled(mu), mf.den, mf.p)


def rear_velocity_asym() -> RationalTF:
    return tf_normalize(
        Polynomial([4 / 3, 2.5 / 3]), Polynomial([0, 0, 1, 1 / 3])
    )


@pytest.fixture(scope="session")
def sym_dyn() -> AgentDynamics:
    mf = front_coupling()
    return AgentDynamics(mf, mf)


@pytest.fixture(scope="session")
def gain_asym_dyn() -> AgentDynamics:
    return AgentDynamics(front_coupling(), rear_scaled(2.5 / 4))


@pytest.fixture(scope="session")
def vel_asym_dyn() -> AgentDynamics:
    return AgentDynamics(front_coupling(), rear_velocity_asym())


def pytest_terminal_summary(terminalreporter):
    """Replay the acceptance PASS/FAIL lines after any run that produced them."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)


def random_pi_pair(rng: np.random.Generator, min_kappa_gap: float = 0.1):
    """Random proper PI-over-double-integrator pair satisfying the checks.

    Positive constant numerator coefficients, two integrators, left-half-plane
    zeros and poles, and |kappa - 1| >= min_kappa_gap.
    """
    tau = rng.uniform(0.1, 1.0)
    den = Polynomial([0.0, 0.0, 1.0, tau])
    while True:
        kif = rng.uniform(0.5, 4.0)
        kir = rng.uniform(0.5, 4.0)
        if abs(kif / kir - 1.0) >= min_kappa_gap:
            break
    kpf = rng.uniform(0.5, 4.0)
    kpr = rng.uniform(0.5, 4.0)
    mf = tf_normalize(Polynomial([kif, kpf]), den)
    mr = tf_normalize(Polynomial([kir, kpr]), den)
    return AgentDynamics(mf, mr)
