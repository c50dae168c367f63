"""Flux-tunable circuit Hamiltonians and their spectra.

The circuit is a loop of inductive energy E_L enclosing a symmetric
two-junction interferometer whose effective Josephson energy is tuned
by the normalized flux f_s:

    E_J(f_s) = 2 E_J cos(pi f_s)

Two Hamiltonians are built on a fixed Fock basis (the f_s-independent
oscillator E_c n^2 + E_L phi^2 of frequency omega0 = 2 sqrt(E_c E_L)):

    full:    H = E_c n^2 - E_J(f_s) cos(phi) + E_L phi^2
    quartic: H = E_c n^2 + (1/2)(2 E_L + E_J(f_s)) phi^2 - E_J(f_s) phi^4 / 24

cos(phi) is evaluated as a Hermitian matrix function, never a truncated
series.  The oscillator is stable while E_L + E_J(f_s)/2 >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateSpectrumError,
    ParameterError,
    StabilityError,
)
from .operators import (
    FockSpace,
    Operator,
    as_hermitian,
    hermitian_eig,
    hermitian_matrix_function,
    make_fock_space,
    phase_charge_operators,
)

# Default truncation; the convergence protocol doubles from here.
DEFAULT_DIM = 60
# Doubling the truncation must move the lowest levels by less than this (GHz).
CONVERGENCE_TOL = 1e-6
MAX_DOUBLINGS = 6


def cos_pi(x):
    """cos(pi * x), exact at half-integer x.

    The flux sweet spot f_s = 1/2 must give E_J(f_s) = 0 exactly so that
    downstream quantities (eta1, the quartic coefficient, g_eff/g) collapse
    to their harmonic-point values bit-for-bit.
    """
    arr = np.asarray(x, dtype=float)
    doubled = 2.0 * np.mod(arr, 2.0)
    nearest = np.round(doubled)
    on_grid = doubled == nearest
    table = np.array([1.0, 0.0, -1.0, 0.0])
    snapped = table[(nearest.astype(np.int64)) % 4]
    out = np.where(on_grid, snapped, np.cos(np.pi * arr))
    return out if out.ndim else float(out)


def effective_josephson(e_j: float, f_s: float):
    """Flux-dependent Josephson energy of the symmetric interferometer (GHz)."""
    return 2.0 * e_j * cos_pi(f_s)


@dataclass(frozen=True)
class CircuitParams:
    """Energy scales (GHz) and applied normalized flux of the circuit."""

    e_c: float
    e_j: float
    e_l: float
    f_s: float

    def __post_init__(self):
        for name in ("e_c", "e_j", "e_l"):
            value = getattr(self, name)
            if not value > 0:
                raise ParameterError(f"{name} must be positive, got {value}")

    @property
    def ej_flux(self) -> float:
        return effective_josephson(self.e_j, self.f_s)

    @property
    def omega0(self) -> float:
        """Frequency of the flux-independent basis oscillator."""
        return 2.0 * math.sqrt(self.e_c * self.e_l)

    @property
    def mass(self) -> float:
        return 1.0 / (2.0 * self.e_c)


class StabilityResult(NamedTuple):
    stable: bool
    margin: float


def stability(p: CircuitParams) -> StabilityResult:
    """Stable iff E_L + E_J(f_s)/2 >= 0; the margin is that quantity in GHz."""
    margin = p.e_l + 0.5 * p.ej_flux
    return StabilityResult(margin >= 0.0, margin)


def _require_stable(p: CircuitParams):
    result = stability(p)
    if not result.stable:
        raise StabilityError(
            f"inverted potential at f_s={p.f_s}: E_L + E_J(f_s)/2 = {result.margin:.4f} GHz"
        )


def circuit_operators(p: CircuitParams, space: FockSpace):
    """Quadrature pair (phi, n) in the fixed omega0 basis."""
    return phase_charge_operators(space, p.mass, p.omega0)


def harmonic_hamiltonian(p: CircuitParams, space: FockSpace) -> Operator:
    """E_c n^2 + E_L phi^2 (the f_s = 1/2 point and the basis oscillator)."""
    phi, n = circuit_operators(p, space)
    mat = p.e_c * (n.matrix @ n.matrix) + p.e_l * (phi.matrix @ phi.matrix)
    return as_hermitian(mat, space)


def full_hamiltonian(p: CircuitParams, space: FockSpace) -> Operator:
    """E_c n^2 - E_J(f_s) cos(phi) + E_L phi^2 with cos as a matrix function."""
    _require_stable(p)
    phi, n = circuit_operators(p, space)
    cos_phi = hermitian_matrix_function(phi, np.cos)
    mat = (
        p.e_c * (n.matrix @ n.matrix)
        - p.ej_flux * cos_phi
        + p.e_l * (phi.matrix @ phi.matrix)
    )
    return as_hermitian(mat, space)


def quartic_hamiltonian(p: CircuitParams, space: FockSpace) -> Operator:
    """cos(phi) expanded through phi^4; same basis as the full Hamiltonian."""
    _require_stable(p)
    phi, n = circuit_operators(p, space)
    phi2 = phi.matrix @ phi.matrix
    mat = (
        p.e_c * (n.matrix @ n.matrix)
        + 0.5 * (2.0 * p.e_l + p.ej_flux) * phi2
        - (p.ej_flux / 24.0) * (phi2 @ phi2)
    )
    return as_hermitian(mat, space)


@dataclass(frozen=True)
class ReducedParams:
    """Scalar parameters of the mean-field quadratic reduction.

    omega1 + eta1 = sqrt(2 E_c (2 E_L + E_J(f_s))) by construction, and
    beta is the fourth power of the zero-point phase width of the reduced
    oscillator.
    """

    omega0: float
    omega1: float
    eta1: float
    beta: float


def reduced_params(p: CircuitParams) -> ReducedParams:
    """Closed-form omega1, eta1, beta for the current flux.

        beta  = E_c / (2 (2 E_L + E_J(f_s)))
        eta1  = beta E_J(f_s) / 4
        omega1 = sqrt(2 E_c (2 E_L + E_J(f_s))) - eta1
    """
    ejf = p.ej_flux
    stiffness = 2.0 * p.e_l + ejf
    if not stiffness > 0:
        raise StabilityError(
            f"2 E_L + E_J(f_s) = {stiffness:.4f} GHz <= 0 at f_s={p.f_s}; "
            "the quadratic reduction does not exist"
        )
    beta = p.e_c / (2.0 * stiffness)
    eta1 = 0.25 * beta * ejf
    omega1 = math.sqrt(2.0 * p.e_c * stiffness) - eta1
    return ReducedParams(omega0=p.omega0, omega1=omega1, eta1=eta1, beta=beta)


@dataclass(frozen=True)
class Spectrum:
    """Lowest levels of a circuit Hamiltonian, energies in GHz ascending."""

    levels: tuple[tuple[int, float], ...]
    e01: float
    e12: float

    @property
    def energies(self) -> np.ndarray:
        return np.array([e for _, e in self.levels])


def spectrum(H: Operator, k: int = 3) -> Spectrum:
    """Lowest ``k`` eigenvalues with the first two gaps extracted."""
    if k < 3:
        raise ParameterError(f"need at least the lowest three levels, got k={k}")
    if k > H.space.dim:
        raise ParameterError(f"k={k} exceeds the truncation dim={H.space.dim}")
    w, _ = hermitian_eig(H)
    levels = tuple((i, float(w[i])) for i in range(k))
    return Spectrum(levels=levels, e01=float(w[1] - w[0]), e12=float(w[2] - w[1]))


def anharmonicity(s: Spectrum) -> float:
    """Relative level-spacing deviation (E12 - E01) / E01."""
    if s.e01 <= 0.0:
        raise DegenerateSpectrumError(f"E01 = {s.e01} GHz is not a usable gap")
    return (s.e12 - s.e01) / s.e01


Builder = Callable[[CircuitParams, FockSpace], Operator]


def _lowest(builder: Builder, p: CircuitParams, dim: int, k: int) -> np.ndarray:
    w, _ = hermitian_eig(builder(p, make_fock_space(dim)))
    return w[:k]


def check_convergence(
    p: CircuitParams,
    dim: int,
    builder: Builder = full_hamiltonian,
    k: int = 3,
    tol: float = CONVERGENCE_TOL,
) -> float:
    """Doubling test: how far the lowest ``k`` levels move from dim to 2*dim.

    Raises ConvergenceError when the movement reaches ``tol`` (GHz).
    """
    k_eff = min(k, dim)
    move = float(
        np.abs(_lowest(builder, p, dim, k_eff) - _lowest(builder, p, 2 * dim, k_eff)).max()
    )
    if move >= tol:
        raise ConvergenceError(
            f"levels move by {move:.3e} GHz when dim doubles from {dim} "
            f"(tolerance {tol:.1e}); the truncation is not converged"
        )
    return move


def converged_spectrum(
    p: CircuitParams,
    dim: int = DEFAULT_DIM,
    builder: Builder = full_hamiltonian,
    k: int = 3,
    tol: float = CONVERGENCE_TOL,
    max_doublings: int = MAX_DOUBLINGS,
) -> tuple[Spectrum, int]:
    """Spectrum at the first truncation whose doubling test passes.

    Starts from ``dim`` and doubles until the lowest ``k`` levels move by
    less than ``tol`` GHz, then reports the values at the accepted (smaller)
    dimension together with that dimension.
    """
    current = dim
    for _ in range(max_doublings):
        try:
            check_convergence(p, current, builder, k, tol)
        except ConvergenceError:
            current *= 2
            continue
        return spectrum(builder(p, make_fock_space(current)), k), current
    raise ConvergenceError(
        f"no converged truncation found up to dim={current} "
        f"(started at {dim}, tolerance {tol:.1e} GHz)"
    )
