"""One-photon, two-source density operators and their coherence content.

A single photon that may come from either of two secondary sources lives in
the span of |1>_1 |0>_2 and |0>_1 |1>_2, so its state is fixed by the 2x2
density operator

    rho = [[rho11,        rho12],
           [conj(rho12),  rho22]],        rho11 + rho22 = 1.

Every valid operator splits uniquely into a maximally coherent component and
a purely diagonal (which-way) component with the same populations:

    rho = p_id * rho_id + p_d * rho_d,    p_id + p_d = 1,
    p_id = |rho12| / sqrt(rho11 * rho22).

``p_id`` is the degree to which the two sources are indistinguishable.  It
equals the modulus of the normalized mutual coherence between the source
fields and, up to the source-imbalance factor 2*sqrt(rho11*rho22), the
visibility of the fringes a detector coupled equally to both sources records.

All types here are immutable values and all operations are pure functions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from random import Random
from typing import NamedTuple

#: Below this diagonal weight a source has no support and p_id is undefined.
DIAG_FLOOR = 1e-12

#: Tolerance for analytic identities (double precision on 2x2 is ~1e-15).
ANALYTIC_TOL = 1e-12

#: Tolerance for user-supplied amplitudes, which arrive rounded.
INPUT_TOL = 1e-9


class NotNormalized(ValueError):
    """Pure-state amplitudes do not square-sum to one."""


class InvalidDensity(ValueError):
    """Density operator violates the trace or positivity invariant."""


class DegenerateSource(ValueError):
    """A source has numerically no support, so p_id is undefined."""


class ZeroField(ValueError):
    """Field constant K is zero; coherence functions are all trivially zero."""


@dataclass(frozen=True)
class OnePhotonState:
    """Pure superposition alpha |1,0> + beta |0,1> of the two source modes."""

    alpha: complex
    beta: complex


@dataclass(frozen=True)
class DensityOperator2:
    """2x2 density operator on the two-source subspace.

    Hermiticity is structural: only the upper off-diagonal element is stored
    and rho21 is implicitly its conjugate.  Validity (unit trace, positivity)
    is checked by :func:`validate_density`, not by the constructor, so that
    invalid operators can be represented and reported on.
    """

    rho11: float
    rho22: float
    rho12: complex

    @property
    def rho21(self) -> complex:
        return complex(self.rho12).conjugate()


@dataclass(frozen=True)
class DensityIssue:
    """One violated density-operator invariant with its residual magnitude."""

    invariant: str
    residual: float


@dataclass(frozen=True)
class MandelDecomposition:
    """Unique split rho = p_id * rho_id + p_d * rho_d."""

    p_id: float
    p_d: float
    rho_id: DensityOperator2
    rho_d: DensityOperator2


@dataclass(frozen=True)
class CoherenceReport:
    """Mutual coherence functions of the two source fields.

    ``gamma11``, ``gamma22`` and ``gamma12`` carry units of |K|^2; the
    normalized ``gamma12_normalized`` is dimensionless and independent of K.
    """

    gamma11: float
    gamma22: float
    gamma12: complex
    gamma12_normalized: complex
    k_const: complex


@dataclass(frozen=True)
class FringeScan:
    """Detection rate sampled over one period of interferometer phase."""

    samples: tuple[tuple[float, float], ...]
    visibility: float


class VisibilityComparison(NamedTuple):
    visibility: float
    p_id: float
    ratio: float


def make_pure_state(psi: OnePhotonState) -> DensityOperator2:
    """Density operator |psi><psi| of a pure two-source state.

    Raises NotNormalized when |alpha|^2 + |beta|^2 strays from 1 by more
    than INPUT_TOL.
    """
    norm = abs(psi.alpha) ** 2 + abs(psi.beta) ** 2
    if not math.isfinite(norm) or abs(norm - 1.0) > INPUT_TOL:
        raise NotNormalized(
            f"|alpha|^2 + |beta|^2 = {norm!r}, deviates from 1 by more than {INPUT_TOL}"
        )
    return DensityOperator2(
        rho11=abs(psi.alpha) ** 2,
        rho22=abs(psi.beta) ** 2,
        rho12=complex(psi.alpha) * complex(psi.beta).conjugate(),
    )


def validate_density(rho: DensityOperator2, tol: float = ANALYTIC_TOL) -> list[DensityIssue]:
    """Report every violated invariant of ``rho``; an empty list means valid.

    Checks the unit trace and the positivity bound |rho12|^2 <= rho11*rho22.
    Non-finite entries short-circuit into a single "finite" issue.
    """
    entries = (rho.rho11, rho.rho22, complex(rho.rho12).real, complex(rho.rho12).imag)
    if not all(math.isfinite(v) for v in entries):
        return [DensityIssue("finite", math.inf)]

    issues = []
    trace_residual = abs(rho.rho11 + rho.rho22 - 1.0)
    if trace_residual > tol:
        issues.append(DensityIssue("trace", trace_residual))
    positivity_excess = abs(rho.rho12) ** 2 - rho.rho11 * rho.rho22
    if positivity_excess > tol:
        issues.append(DensityIssue("positivity", positivity_excess))
    return issues


def _require_valid(rho: DensityOperator2) -> None:
    issues = validate_density(rho)
    if issues:
        detail = ", ".join(f"{i.invariant} (residual {i.residual!r})" for i in issues)
        raise InvalidDensity(f"invalid density operator: {detail}")


def _require_nondegenerate(rho: DensityOperator2) -> None:
    if min(rho.rho11, rho.rho22) < DIAG_FLOOR:
        raise DegenerateSource(
            f"source weights ({rho.rho11!r}, {rho.rho22!r}) leave one source empty; "
            "indistinguishability of the two sources is undefined"
        )


def mandel_decompose(rho: DensityOperator2) -> MandelDecomposition:
    """Split ``rho`` into its coherent and which-way components.

    rho_d is the diagonal of rho; rho_id carries the same diagonal with the
    maximal off-diagonal sqrt(rho11*rho22) * exp(i*arg rho12).  When rho12 is
    exactly zero the phase is fixed to 0; the choice is unobservable because
    p_id is then 0.
    """
    _require_valid(rho)
    _require_nondegenerate(rho)

    geo = math.sqrt(rho.rho11 * rho.rho22)
    mag = abs(rho.rho12)
    # Positivity slack can push mag a hair over geo; p_id is a probability.
    p_id = min(mag / geo, 1.0)
    p_d = 1.0 - p_id
    if mag == 0.0:
        off = complex(geo)
    else:
        off = geo * (complex(rho.rho12) / mag)
    return MandelDecomposition(
        p_id=p_id,
        p_d=p_d,
        rho_id=DensityOperator2(rho.rho11, rho.rho22, off),
        rho_d=DensityOperator2(rho.rho11, rho.rho22, 0j),
    )


def degree_of_indistinguishability(rho: DensityOperator2) -> float:
    """p_id = |rho12| / sqrt(rho11*rho22), the weight of the coherent part."""
    return mandel_decompose(rho).p_id


def coherence_functions(rho: DensityOperator2, k_const: complex) -> CoherenceReport:
    """Mutual coherence functions for fields E_j = K * a_j.

    gamma11 = |K|^2 rho11, gamma22 = |K|^2 rho22, gamma12 = |K|^2 rho21,
    and the normalized gamma12 is rho21 / sqrt(rho11*rho22), whose modulus
    equals the degree of indistinguishability and does not depend on K.
    """
    _require_valid(rho)
    if k_const == 0:
        raise ZeroField("k_const must be nonzero")
    _require_nondegenerate(rho)

    k2 = abs(k_const) ** 2
    rho21 = complex(rho.rho12).conjugate()
    return CoherenceReport(
        gamma11=k2 * rho.rho11,
        gamma22=k2 * rho.rho22,
        gamma12=k2 * rho21,
        gamma12_normalized=rho21 / math.sqrt(rho.rho11 * rho.rho22),
        k_const=complex(k_const),
    )


def fringe_scan(rho: DensityOperator2, k_const: complex, n_samples: int) -> FringeScan:
    """Sample R(phi) = gamma11 + gamma22 + 2*Re(gamma12 * e^{i phi}).

    Phases are the n_samples equally spaced points of [0, 2*pi); the scan's
    visibility is (max - min) / (max + min) over the sampled rates.  The
    detector is coupled equally to both sources.
    """
    _require_valid(rho)
    if k_const == 0:
        raise ZeroField("k_const must be nonzero")
    if n_samples < 8:
        raise ValueError(f"n_samples must be >= 8, got {n_samples}")

    k2 = abs(k_const) ** 2
    g12 = k2 * complex(rho.rho12).conjugate()
    base = k2 * (rho.rho11 + rho.rho22)
    step = 2.0 * math.pi / n_samples
    samples = []
    for k in range(n_samples):
        phi = k * step
        rate = base + 2.0 * (g12 * cmath.exp(1j * phi)).real
        samples.append((phi, rate))
    rates = [r for _, r in samples]
    hi, lo = max(rates), min(rates)
    return FringeScan(samples=tuple(samples), visibility=(hi - lo) / (hi + lo))


def visibility_vs_pid(rho: DensityOperator2) -> VisibilityComparison:
    """Analytic fringe visibility next to p_id, plus their ratio.

    With equal detector coupling the visibility is 2*sqrt(rho11*rho22)*p_id,
    which never exceeds p_id and matches it exactly on balanced sources.
    Both numbers (and the ratio, NaN when p_id = 0) are reported so the
    relation between them can be examined rather than assumed.
    """
    dec = mandel_decompose(rho)
    v = 2.0 * math.sqrt(rho.rho11 * rho.rho22) * dec.p_id
    ratio = v / dec.p_id if dec.p_id > 0.0 else math.nan
    return VisibilityComparison(visibility=v, p_id=dec.p_id, ratio=ratio)


def random_density(rng: Random, min_diag: float = 1e-6) -> DensityOperator2:
    """Random valid density operator for tests.

    Draws a random pure two-mode state and a random diagonal mixture, mixes
    them with a random weight, and rejects draws whose smallest source weight
    falls under ``min_diag``.  Validity holds by construction: convex mixes
    of unit-trace positive operators stay unit-trace positive.
    """
    while True:
        a = complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0))
        b = complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0))
        nrm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        if nrm < 1e-6:
            continue
        a, b = a / nrm, b / nrm
        d11 = rng.random()
        w = rng.random()
        rho11 = w * abs(a) ** 2 + (1.0 - w) * d11
        rho22 = w * abs(b) ** 2 + (1.0 - w) * (1.0 - d11)
        rho12 = w * a * b.conjugate()
        if min(rho11, rho22) >= min_diag:
            return DensityOperator2(rho11, rho22, rho12)
