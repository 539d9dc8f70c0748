"""Time-domain wave traces via numerical inverse Laplace transformation.

The transform is inverted on a Bromwich line s = sigma + j*omega: the
evaluator is sampled on a uniform omega grid, the spectrum is tapered with a
raised cosine on its top fraction, and an inverse real FFT plus exp(sigma*t)
weighting recovers the time series. Sampling the line with spacing
2*pi/period aliases the weighted signal with period `period`; the period is
therefore held at 8x the requested horizon so the wraparound images carry a
factor exp(-sigma*period) ~ 1e-7 at the default sigma = 2/T_final.

Step inputs ride along as an extra 1/s factor in the evaluator; the k = 0
sample sits at s = sigma on the line, so nothing is ever evaluated at the
origin pole.

Evaluators are called in descending-frequency order, once per sample, so
wave evaluators can chain branch-continuity hints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NonDecaying
from .platoon import SimConfig, Topology, build_network, default_dt, simulate
from .tf import AgentDynamics
from .waves import awtf_eval, reflection_eval

PERIOD_FACTOR = 8           # FFT period as a multiple of the requested horizon
TAIL_FRACTION = 0.1         # spectrum tail inspected by the decay guard
TAIL_THRESHOLD = 0.02       # mean tail magnitude above this fraction of the peak fails


@dataclass(frozen=True)
class InverseLaplaceConfig:
    """Sampling plan for one inversion.

    samples is the time-grid length over the full FFT period (power of two,
    at least 1024); the returned trace covers [0, T_final], i.e. the first
    1/PERIOD_FACTOR of the period. sigma defaults to 2/T_final.
    """

    T_final: float
    samples: int = 4096
    sigma: Optional[float] = None
    window: float = 0.1

    def __post_init__(self):
        if self.T_final <= 0:
            raise ValueError("T_final must be positive")
        if self.samples < 1024 or self.samples & (self.samples - 1):
            raise ValueError("samples must be a power of two, at least 1024")
        if not 0.0 <= self.window < 1.0:
            raise ValueError("window fraction must be in [0, 1)")
        if self.sigma is not None and self.sigma <= 0:
            raise ValueError("sigma must be positive")

    @property
    def abscissa(self) -> float:
        return self.sigma if self.sigma is not None else 2.0 / self.T_final

    @property
    def period(self) -> float:
        return PERIOD_FACTOR * self.T_final


def inverse_laplace(
    F: Callable[[complex], complex],
    cfg: InverseLaplaceConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Invert F to (times, values) on [0, cfg.T_final].

    F must be analytic for Re(s) >= sigma. Raises NonDecaying when the
    sampled spectrum has not rolled off by the top of the band, which means
    the band is too narrow (or F has a direct feedthrough term with no
    decaying transform).
    """
    sigma = cfg.abscissa
    period = cfg.period
    n = cfg.samples
    m = n // 2
    d_omega = 2.0 * np.pi / period
    omegas = d_omega * np.arange(m + 1)

    spectrum = np.empty(m + 1, dtype=complex)
    for k in range(m, -1, -1):  # descending so hint chains seed at large |s|
        spectrum[k] = F(sigma + 1j * omegas[k])

    mags = np.abs(spectrum)
    peak = float(np.max(mags))
    if peak == 0.0:
        times = np.arange(n) * (period / n)
        keep = times <= cfg.T_final
        return times[keep], np.zeros(int(np.count_nonzero(keep)))
    tail = mags[int((1.0 - TAIL_FRACTION) * m):]
    if float(np.mean(tail)) > TAIL_THRESHOLD * peak:
        raise NonDecaying(
            f"spectrum tail mean {float(np.mean(tail)):.3g} vs peak {peak:.3g}; "
            "widen the band (more samples) or the transform does not decay"
        )

    weights = np.ones(m + 1)
    if cfg.window > 0.0:
        k0 = int((1.0 - cfg.window) * m)
        ramp = np.arange(m + 1 - k0)
        weights[k0:] = 0.5 * (1.0 + np.cos(np.pi * ramp / (m - k0)))

    dt = period / n
    g = np.fft.irfft(spectrum * weights, n=n) / dt
    times = np.arange(n) * dt
    keep = times <= cfg.T_final
    times = times[keep]
    values = g[keep] * np.exp(sigma * times)
    return times, values


@dataclass(frozen=True)
class WaveComponents:
    """Forward wave a, backward wave b and their sum x for one agent."""

    times: np.ndarray
    a: np.ndarray
    b: np.ndarray
    x: np.ndarray


class _WaveSpectra:
    """Per-sample wave quantities for a step-driven N-agent path.

    One hint-chained pass produces both component spectra so the two
    inversions see identical branch choices.
    """

    def __init__(self, d: AgentDynamics, N: int, step_amplitude: float):
        self.d = d
        self.N = N
        self.amp = step_amplitude
        self._hint = None

    def sample_all(
        self, n: int, s_values: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        """Spectra (A_n, B_n) over s_values, evaluated in the given order."""
        a = np.empty(len(s_values), dtype=complex)
        b = np.empty(len(s_values), dtype=complex)
        for i, s in enumerate(s_values):
            ws = awtf_eval(self.d, s, self._hint)
            self._hint = ws
            refl = reflection_eval(self.d, s, hint=ws)
            gp, gm = ws.g_plus, ws.g_minus
            loop = refl.t1 * refl.tN * (gp * gm) ** (self.N - 1)
            x0 = self.amp / s
            a[i] = gp**n * x0 / (1.0 - loop)
            b[i] = gm ** (self.N - n) * refl.tN * gp**self.N * x0 / (1.0 - loop)
        return a, b


def wave_components(
    d: AgentDynamics,
    N: int,
    n: int,
    cfg: InverseLaplaceConfig,
    step_amplitude: float = 1.0,
) -> WaveComponents:
    """Travelling-wave decomposition of agent n's step response on a path of N.

    Frequency-domain assembly with both boundary reflections folded in:

      A_n = g_plus**n * X0 / (1 - t1*tN*(g_plus*g_minus)**(N-1))
      B_n = g_minus**(N-n) * tN * g_plus**N * X0 / (same denominator)

    and x_n = a_n + b_n after inversion.
    """
    if not 1 <= n <= N:
        raise ValueError(f"agent index n={n} outside 1..{N}")
    sigma = cfg.abscissa
    m = cfg.samples // 2
    d_omega = 2.0 * np.pi / cfg.period
    omegas = d_omega * np.arange(m + 1)
    s_desc = sigma + 1j * omegas[::-1]

    spectra = _WaveSpectra(d, N, step_amplitude)
    a_desc, b_desc = spectra.sample_all(n, s_desc)
    a_spectrum = a_desc[::-1]
    b_spectrum = b_desc[::-1]

    times, a_t = _invert_sampled(a_spectrum, cfg)
    _, b_t = _invert_sampled(b_spectrum, cfg)
    return WaveComponents(times=times, a=a_t, b=b_t, x=a_t + b_t)


def _invert_sampled(
    spectrum: np.ndarray, cfg: InverseLaplaceConfig
) -> tuple[np.ndarray, np.ndarray]:
    """inverse_laplace for an already-sampled one-sided spectrum."""
    sampled = iter(spectrum[::-1])
    return inverse_laplace(lambda s: next(sampled), cfg)


def early_time_check(
    d: AgentDynamics,
    n: int,
    horizon: float,
    N: int = 25,
    cfg: Optional[InverseLaplaceConfig] = None,
    dt: Optional[float] = None,
) -> float:
    """Max gap between the simulated x_n and the pure forward wave g_plus**n.

    Before the wave has reached the far boundary and returned, the forward
    component alone is the exact response, so this deviation stays at
    inversion accuracy for horizons below the round-trip time. N sizes the
    simulated path; its round trip 2N - n must exceed the horizon for the
    comparison to mean anything.
    """
    if n == 0:
        return 0.0
    if not 1 <= n <= N:
        raise ValueError(f"agent index n={n} outside 1..{N}")
    cfg = cfg or InverseLaplaceConfig(T_final=horizon)
    sigma = cfg.abscissa
    m = cfg.samples // 2
    d_omega = 2.0 * np.pi / cfg.period
    omegas = d_omega * np.arange(m + 1)

    hint = None
    spectrum = np.empty(m + 1, dtype=complex)
    for k in range(m, -1, -1):
        s = sigma + 1j * omegas[k]
        hint = awtf_eval(d, s, hint)
        spectrum[k] = hint.g_plus**n / s
    times, wave = _invert_sampled(spectrum, cfg)

    net = build_network(Topology.path(N), d)
    sim_cfg = SimConfig(dt=dt or default_dt(d), T_final=horizon)
    traj = simulate(net, sim_cfg)
    sim_on_wave_grid = np.interp(times, traj.times, traj.agent(n))
    return float(np.max(np.abs(sim_on_wave_grid - wave)))
