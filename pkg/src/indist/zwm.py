"""Two-crystal induced-coherence model (Zou-Wang-Mandel experiment).

A pump photon is split toward two nonlinear crystals, each of which can
down-convert it into a signal/idler pair.  When the idler path of the first
crystal is aligned into the second, detecting an idler photon cannot reveal
which crystal fired, and the signal field keeps the pump coherence.  An
obstacle or misalignment that transmits only the amplitude tau between the
idler paths leaves which-way information behind; the signal coherence is
scaled by the same overlap:

    rho11 = |alpha|^2,  rho22 = |beta|^2,  rho12 = alpha * conj(beta) * conj(tau)

so the degree of indistinguishability of the two signal paths is |tau|,
independent of the pump split.  |tau| = 1 is perfect alignment, |tau| = 0 an
opaque obstacle.  The blocked amplitude feeds the coincidence protocol that
identifies the source: an idler photon escapes the aligned path with
probability 1 - |tau|^2, which is the chance that signal/idler coincidence
counting can tag the emitting crystal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import onephoton
from .onephoton import DensityOperator2

AMPLITUDE_TOL = 1e-12


class InvalidSetup(ValueError):
    """Pump split not normalized or idler transmission above unit magnitude."""


@dataclass(frozen=True)
class ZwmSetup:
    """Beam-splitter amplitudes toward the two crystals, plus idler overlap."""

    pump_alpha: complex
    pump_beta: complex
    idler_transmission: complex


@dataclass(frozen=True)
class SweepRow:
    t_mag: float
    p_id: float
    visibility: float
    coincidence_id_prob: float


def _require_valid(setup: ZwmSetup) -> None:
    norm = abs(setup.pump_alpha) ** 2 + abs(setup.pump_beta) ** 2
    if not math.isfinite(norm) or abs(norm - 1.0) > AMPLITUDE_TOL:
        raise InvalidSetup(f"pump amplitudes square-sum to {norm!r}, expected 1")
    t = abs(setup.idler_transmission)
    if not math.isfinite(t) or t > 1.0 + AMPLITUDE_TOL:
        raise InvalidSetup(f"idler transmission magnitude {t!r} exceeds 1")


def zwm_signal_state(setup: ZwmSetup) -> DensityOperator2:
    """Signal-photon density operator for the given alignment.

    The pump coherence alpha*conj(beta) survives only to the extent the two
    idler modes overlap, which is what makes the experiment a which-way knob.
    """
    _require_valid(setup)
    a = complex(setup.pump_alpha)
    b = complex(setup.pump_beta)
    tau = complex(setup.idler_transmission)
    return DensityOperator2(
        rho11=abs(a) ** 2,
        rho22=abs(b) ** 2,
        rho12=a * b.conjugate() * tau.conjugate(),
    )


def whichway_coincidence_prob(setup: ZwmSetup) -> float:
    """Probability 1 - |tau|^2 that coincidence counting can tag the source.

    This equals p_d = 1 - p_id only at |tau| in {0, 1}; it is reported
    separately so the two notions stay visibly distinct.
    """
    _require_valid(setup)
    return 1.0 - abs(setup.idler_transmission) ** 2


def sweep_transmission(setup: ZwmSetup, steps: int) -> list[SweepRow]:
    """Evaluate the model on a uniform |tau| grid from 0 to 1.

    The phase of tau and the pump split are held fixed; rows come back in
    grid order and the p_id column is monotone nondecreasing.
    """
    _require_valid(setup)
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")

    t0 = abs(setup.idler_transmission)
    phase = complex(setup.idler_transmission) / t0 if t0 > 0.0 else complex(1.0)

    rows = []
    for i in range(steps):
        t = i / (steps - 1)
        at_t = ZwmSetup(setup.pump_alpha, setup.pump_beta, t * phase)
        rho = zwm_signal_state(at_t)
        comparison = onephoton.visibility_vs_pid(rho)
        rows.append(
            SweepRow(
                t_mag=t,
                p_id=comparison.p_id,
                visibility=comparison.visibility,
                coincidence_id_prob=whichway_coincidence_prob(at_t),
            )
        )
    return rows
