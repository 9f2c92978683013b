"""Phenomenological mode-coupling Hamiltonians with dissipators and charges.

All constructors work in units with hbar = 1; frequencies, couplings, and
damping rates are angular. Each returned ModelSpec validates itself:
the Hamiltonian must be hermitian (defect < 1e-12) and every attached charge
must commute with it (max |[H, M]| < 1e-10).

Mode ordering conventions (documented per constructor):

* two-mode chi2 and Kerr cross models: (signal a, pump b) = modes (0, 1)
* three-mode chi2: (pump c, signal a, idler b) = modes (0, 1, 2)
* degenerate parametric oscillator: (signal a, pump b) = modes (0, 1)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, ParameterError, TruncationError
from .fock import (
    FieldOperator,
    SpaceDescriptor,
    annihilation,
    number_operator,
    _pack,
)

CHARGE_COMMUTATOR_TOL = 1e-10
HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class RotatingTerm:
    """One rotating contribution O e^{i nu t} + O-dag e^{-i conj(nu) t}."""

    operator: FieldOperator
    frequency: complex


@dataclass(frozen=True)
class ModelSpec:
    """A Hamiltonian with optional rotating terms, dissipators, and charges.

    ``interaction_picture`` records whether the free-field part has been
    removed (slowly-varying-operator convention), so downstream diagnostics
    can interpret phases correctly.
    """

    space: SpaceDescriptor
    hamiltonian: FieldOperator
    rotating_terms: tuple[RotatingTerm, ...] = ()
    dissipators: tuple[tuple[FieldOperator, float], ...] = ()
    charges: dict = field(default_factory=dict)
    interaction_picture: bool = False
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        defect = self.hamiltonian.hermiticity_defect()
        if self.rotating_terms:
            defect = max(defect, self.hamiltonian_at(0.731).hermiticity_defect())
        if defect >= HERMITICITY_TOL:
            raise ContractError(f"Hamiltonian hermiticity defect {defect:.2e} beyond 1e-12")
        for _, rate in self.dissipators:
            if rate < 0:
                raise ParameterError(f"dissipator rate {rate} must be >= 0")
        for name, charge in self.charges.items():
            comm = self.hamiltonian.commutator(charge).max_abs()
            if comm >= CHARGE_COMMUTATOR_TOL:
                raise ContractError(
                    f"charge {name!r} does not commute with H: max|[H,M]| = {comm:.2e}")

    @property
    def is_time_dependent(self) -> bool:
        return len(self.rotating_terms) > 0

    def hamiltonian_at(self, t: float) -> FieldOperator:
        """Hamiltonian evaluated at time t (hermitian for any t)."""
        H = self.hamiltonian
        for term in self.rotating_terms:
            ph = np.exp(1j * term.frequency * t)
            H = H + ph * term.operator + np.conj(ph) * term.operator.dag()
        return H

    def charge(self, name: str) -> FieldOperator:
        if name not in self.charges:
            raise ContractError(f"model carries no charge named {name!r}")
        return self.charges[name]


def _require_modes(space: SpaceDescriptor, n: int, what: str):
    if space.n_modes != n:
        raise ContractError(f"{what} needs a {n}-mode space, got {space.n_modes} modes")


def h_two_mode_chi2(space: SpaceDescriptor, omega: float, kappa: float) -> ModelSpec:
    """Degenerate chi2 coupling of a signal at omega to a pump at 2*omega.

        H = omega n_a + 2 omega n_b + kappa [(a-dag)^2 b + a^2 b-dag]

    Modes are (signal a, pump b) = (0, 1). The conserved charge
    M = n_a + 2 n_b is attached under the name "M". The charge commutes with
    H exactly even under truncation because the retained couplings stay
    within fixed M shells.
    """
    _require_modes(space, 2, "h_two_mode_chi2")
    a = annihilation(space, 0)
    b = annihilation(space, 1)
    na, nb = number_operator(space, 0), number_operator(space, 1)
    hint = a.dag() @ a.dag() @ b
    H = omega * na + (2.0 * omega) * nb + kappa * (hint + hint.dag())
    M = na + 2.0 * nb
    return ModelSpec(
        space, _pack(space, H.matrix),
        charges={"M": _pack(space, M.matrix)},
        kind="two_mode_chi2",
        params={"omega": omega, "kappa": kappa},
    )


def h_three_mode_chi2(space: SpaceDescriptor, omega1: float, omega2: float,
                      kappa: float) -> ModelSpec:
    """Nondegenerate chi2 model: pump at omega1+omega2 feeding signal/idler.

        H = (omega1+omega2) n_c + omega1 n_a + omega2 n_b
            + kappa (c-dag a b + c a-dag b-dag)

    Modes are (pump c, signal a, idler b) = (0, 1, 2). Charges
    M1 = n_a - n_b and M2 = 2 n_c + n_a + n_b are attached, along with the
    combinations K1 = n_c + n_a and K2 = n_c + n_b used by the
    pump/signal fluctuation bounds.
    """
    _require_modes(space, 3, "h_three_mode_chi2")
    c = annihilation(space, 0)
    a = annihilation(space, 1)
    b = annihilation(space, 2)
    nc, na, nb = (number_operator(space, k) for k in range(3))
    hint = c.dag() @ a @ b
    H = (omega1 + omega2) * nc + omega1 * na + omega2 * nb + kappa * (hint + hint.dag())
    charges = {
        "M1": _pack(space, (na - nb).matrix),
        "M2": _pack(space, (2.0 * nc + na + nb).matrix),
        "K1": _pack(space, (nc + na).matrix),
        "K2": _pack(space, (nc + nb).matrix),
    }
    return ModelSpec(
        space, _pack(space, H.matrix), charges=charges,
        kind="three_mode_chi2",
        params={"omega1": omega1, "omega2": omega2, "kappa": kappa},
    )


def h_kerr_single(space: SpaceDescriptor, omega: float, kappa: float) -> ModelSpec:
    """Single-mode Kerr Hamiltonian, diagonal in the Fock basis.

        H = omega n + (kappa/2) (a-dag)^2 a^2

    Fock eigenvalue: n*omega + n(n-1)*kappa/2.
    """
    _require_modes(space, 1, "h_kerr_single")
    n = space.number_values(0).astype(float)
    diag = omega * n + 0.5 * kappa * n * (n - 1.0)
    H = _pack(space, np.diag(diag.astype(complex)))
    return ModelSpec(
        space, H, charges={"n": number_operator(space, 0)},
        kind="kerr_single", params={"omega": omega, "kappa": kappa},
    )


def h_kerr_cross(space: SpaceDescriptor, omega1: float, omega2: float,
                 kappa: float) -> ModelSpec:
    """Cross-Kerr model: H = omega1 n_a + omega2 n_b + (kappa/2) a-dag b-dag a b.

    Diagonal; Fock eigenvalue n*omega1 + m*omega2 + kappa*n*m/2. Both mode
    numbers are conserved (QND structure).
    """
    _require_modes(space, 2, "h_kerr_cross")
    na = space.number_values(0).astype(float)
    nb = space.number_values(1).astype(float)
    diag = omega1 * na + omega2 * nb + 0.5 * kappa * na * nb
    H = _pack(space, np.diag(diag.astype(complex)))
    return ModelSpec(
        space, H,
        charges={"n_a": number_operator(space, 0), "n_b": number_operator(space, 1)},
        kind="kerr_cross",
        params={"omega1": omega1, "omega2": omega2, "kappa": kappa},
    )


def h_nphoton(space: SpaceDescriptor, omega: float, kappa_n: float, n: int) -> ModelSpec:
    """Two-mode n-photon down-conversion model.

        H = omega n_a + n*omega n_b + kappa_n [(a-dag)^n b + a^n b-dag]

    One pump photon at n*omega converts into n signal photons. The conserved
    charge M_n = n_a + n n_b is attached as "Mn". Modes are
    (signal a, pump b) = (0, 1). The signal truncation must exceed n.
    """
    _require_modes(space, 2, "h_nphoton")
    if int(n) != n or n < 2:
        raise ParameterError(f"photon multiplicity n must be an integer >= 2, got {n}")
    n = int(n)
    if space.dims[0] <= n:
        raise TruncationError(
            f"signal dim {space.dims[0]} cannot represent a {n}-photon conversion")
    a = annihilation(space, 0)
    b = annihilation(space, 1)
    na, nb = number_operator(space, 0), number_operator(space, 1)
    adn = a.dag()
    for _ in range(n - 1):
        adn = adn @ a.dag()
    hint = adn @ b
    H = omega * na + (n * omega) * nb + kappa_n * (hint + hint.dag())
    return ModelSpec(
        space, _pack(space, H.matrix),
        charges={"Mn": _pack(space, (na + float(n) * nb).matrix)},
        kind="nphoton",
        params={"omega": omega, "kappa_n": kappa_n, "n": n},
    )


def h_parametric_classical_pump(
    space: SpaceDescriptor,
    kappa: float,
    beta: complex,
    phi_p: float | None = None,
    rotating_frame: bool = True,
    omega: float = 0.0,
) -> ModelSpec:
    """Single-mode parametric model with the pump replaced by a c-number.

    In the rotating frame (default; free field removed) the generator is the
    static

        H_p = i (kappa/2) sqrt(N_p) [e^{i phi_p} (a-dag)^2 - e^{-i phi_p} a^2]

    with N_p = |beta|^2, so u = kappa*sqrt(N_p)*t is the squeeze parameter.
    With ``rotating_frame=False`` the free term omega*n is kept and the
    interaction rotates at 2*omega, handing the evolver a genuinely
    time-dependent generator; both routes agree after undoing the frame.

    ``phi_p`` overrides the pump phase; by default it is arg(beta).
    """
    _require_modes(space, 1, "h_parametric_classical_pump")
    np_pump = abs(beta) ** 2
    if np_pump <= 0:
        raise ParameterError("pump amplitude must be nonzero")
    phase = float(np.angle(beta)) if phi_p is None else float(phi_p)
    a = annihilation(space, 0)
    ad2 = a.dag() @ a.dag()
    gain = 0.5 * kappa * np.sqrt(np_pump)
    hp = (1j * gain) * (np.exp(1j * phase) * ad2 - np.exp(-1j * phase) * (ad2.dag()))
    params = {"kappa": kappa, "n_pump": np_pump, "phi_p": phase, "omega": omega}
    if rotating_frame:
        return ModelSpec(space, _pack(space, hp.matrix), interaction_picture=True,
                         kind="parametric_pump", params=params)
    nop = number_operator(space, 0)
    rot = RotatingTerm(
        operator=_pack(space, ((1j * gain * np.exp(1j * phase)) * ad2).matrix),
        frequency=-2.0 * omega,
    )
    return ModelSpec(space, _pack(space, (omega * nop).matrix), rotating_terms=(rot,),
                     interaction_picture=False, kind="parametric_pump", params=params)


def h_chi2_displaced_pump(space: SpaceDescriptor, kappa: float, beta: complex) -> ModelSpec:
    """Two-mode chi2 interaction in the displaced pump frame.

    Writing the pump as beta + b (coherent amplitude plus fluctuations), the
    interaction-picture generator

        H = i (kappa/2) [(beta + b)(a-dag)^2 - (beta* + b-dag) a^2]

    is exactly unitarily equivalent to the chi2 interaction with the pump
    started in |beta>, but only the fluctuation mode needs Fock-space room.
    Starting both modes in the vacuum reproduces the physical coherent-pump
    problem including depletion and pump noise. Modes are (signal a,
    fluctuation b) = (0, 1).
    """
    _require_modes(space, 2, "h_chi2_displaced_pump")
    a = annihilation(space, 0)
    b = annihilation(space, 1)
    ad2 = a.dag() @ a.dag()
    half = (0.5j * kappa) * ((complex(beta) * ad2) + (b @ ad2))
    H = half + half.dag()
    return ModelSpec(
        space, _pack(space, H.matrix), interaction_picture=True,
        kind="chi2_displaced_pump", params={"kappa": kappa, "beta": complex(beta)},
    )


def dpo_model(space: SpaceDescriptor, kappa: float, E0: float,
              gamma_a: float, gamma_b: float) -> ModelSpec:
    """Driven, damped degenerate parametric oscillator (interaction picture).

        H_int = i (kappa/2) (b (a-dag)^2 - b-dag a^2) + i E0 (b-dag - b)

    with cavity-loss dissipators Lambda(rho) = gamma (2 A rho A-dag
    - A-dag A rho - rho A-dag A) for A = a and A = b. In this convention the
    field amplitude decays at gamma and the photon number at 2*gamma.
    Modes are (signal a, pump b) = (0, 1).
    """
    _require_modes(space, 2, "dpo_model")
    if gamma_a < 0 or gamma_b < 0 or E0 < 0:
        raise ParameterError("rates and drive must be >= 0")
    a = annihilation(space, 0)
    b = annihilation(space, 1)
    ad2 = a.dag() @ a.dag()
    x = (0.5 * kappa) * (b @ ad2) + E0 * b.dag()
    H = 1j * x - 1j * x.dag()
    return ModelSpec(
        space, _pack(space, H.matrix),
        dissipators=((a, float(gamma_a)), (b, float(gamma_b))),
        interaction_picture=True,
        kind="dpo",
        params={"kappa": kappa, "E0": E0, "gamma_a": gamma_a, "gamma_b": gamma_b},
    )
