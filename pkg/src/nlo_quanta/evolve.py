"""Unitary and Lindblad time evolution, and Liouvillian steady states.

Numerical routes
----------------
* Static Hamiltonians: exact eigendecomposition below ``DENSE_EVOLVE_DIM``,
  Krylov ``expm_multiply`` above it.
* Time-dependent (rotating-term) Hamiltonians: adaptive DOP853 with local
  error <= 1e-10.
* Master equation: adaptive DOP853 on the vectorized density matrix. Trace
  renormalization is deliberately off; trace drift is an error signal.
* Steady states: dense null space for small Liouvillians, ILU-preconditioned
  GMRES on a trace-constrained system for large ones, with Krylov
  time-marching as the fallback.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import solve_ivp

from .errors import AmbiguityError, ContractError, NumericsError
from .fock import FieldOperator, QuantumState
from .models import ModelSpec

DENSE_EVOLVE_DIM = 512
PURE_NORM_TOL = 1e-9
TRACE_TOL = 1e-8
STEADY_RESIDUAL_TOL = 1e-10


@dataclass
class EvolutionResult:
    """Sampled trajectory: states at the requested times plus named series."""

    model: ModelSpec
    times: np.ndarray
    states: list
    observables: dict = field(default_factory=dict)

    def state_at(self, i: int) -> QuantumState:
        return self.states[i]

    def expectation_series(self, op: FieldOperator) -> np.ndarray:
        from .fock import expectation

        return np.array([expectation(s, op) for s in self.states])

    def variance_series(self, op: FieldOperator) -> np.ndarray:
        from .fock import variance

        return np.array([variance(s, op) for s in self.states])


def _record_observables(result: EvolutionResult, observables):
    if observables:
        for name, op in observables.items():
            result.observables[name] = result.expectation_series(op)


def _require_forward_times(times):
    """The ODE routes anchor the initial state at t = 0 and integrate
    forward, so sample times must be nondecreasing and nonnegative."""
    if times.min() < 0.0 or np.any(np.diff(times) < 0.0):
        raise ContractError("ODE-based evolution needs nondecreasing times >= 0")


def evolve_pure(model: ModelSpec, psi0: QuantumState, times,
                observables: dict | None = None) -> EvolutionResult:
    """Schroedinger evolution psi(t) = U(t) psi0 for a dissipation-free model.

    Raises ContractError if the model carries dissipators or psi0 is not
    pure; raises NumericsError if any sampled state's norm drifts beyond
    1e-9.
    """
    if model.dissipators:
        raise ContractError("evolve_pure requires a model without dissipators")
    if not psi0.is_pure:
        raise ContractError("evolve_pure requires a pure initial state")
    if psi0.space != model.space:
        raise ContractError("state and model live on different spaces")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    dim = model.space.total_dim

    if not model.is_time_dependent:
        if dim <= DENSE_EVOLVE_DIM:
            H = model.hamiltonian.dense()
            evals, evecs = np.linalg.eigh(H)
            coeff = evecs.conj().T @ psi0.data
            vecs = [evecs @ (np.exp(-1j * evals * t) * coeff) for t in times]
        else:
            H = model.hamiltonian.sparse()
            vecs = []
            psi = psi0.data.astype(complex)
            t_prev = 0.0
            for t in times:
                dt = t - t_prev
                if dt != 0.0:
                    psi = spla.expm_multiply((-1j * dt) * H, psi)
                    t_prev = t
                vecs.append(psi.copy())
    elif np.all(times == 0.0):
        vecs = [psi0.data.astype(complex) for _ in times]
    else:
        _require_forward_times(times)
        Hbase = model.hamiltonian.sparse()
        terms = [(rt.operator.sparse(), rt.frequency) for rt in model.rotating_terms]
        dags = [(O.conj().T.tocsr(), np.conj(nu)) for O, nu in terms]

        def rhs(t, y):
            hy = Hbase @ y
            for (O, nu), (Od, nud) in zip(terms, dags):
                hy = hy + np.exp(1j * nu * t) * (O @ y) + np.exp(-1j * nud * t) * (Od @ y)
            return -1j * hy

        sol = solve_ivp(rhs, (0.0, times.max()), psi0.data.astype(complex),
                        t_eval=times, method="DOP853", rtol=1e-11, atol=1e-12)
        if not sol.success:
            raise NumericsError(f"pure-state integration failed: {sol.message}")
        vecs = [sol.y[:, i] for i in range(sol.y.shape[1])]

    states = []
    for t, v in zip(times, vecs):
        nrm = float(np.linalg.norm(v))
        if abs(nrm - 1.0) >= PURE_NORM_TOL or not np.isfinite(nrm):
            raise NumericsError(f"norm drift {abs(nrm - 1.0):.2e} at t={t} exceeds 1e-9")
        states.append(QuantumState(model.space, "pure", v / nrm, psi0.tail_mass))
    result = EvolutionResult(model, times, states)
    _record_observables(result, observables)
    return result


# ---------------------------------------------------------------------------
# Liouvillian machinery


def liouvillian(model: ModelSpec) -> sp.csr_matrix:
    """Sparse superoperator L with d vec(rho)/dt = L vec(rho) (row-major vec).

    Uses the convention Lambda(rho) = gamma (2 A rho A-dag - A-dag A rho
    - rho A-dag A): amplitudes decay at gamma, photon numbers at 2*gamma.
    """
    if model.is_time_dependent:
        raise ContractError("Liouvillian construction needs a static Hamiltonian")
    d = model.space.total_dim
    I = sp.identity(d, format="csr", dtype=complex)
    H = model.hamiltonian.sparse()
    L = -1j * (sp.kron(H, I) - sp.kron(I, H.T))
    for op, gamma in model.dissipators:
        A = op.sparse()
        AdA = (A.conj().T @ A).tocsr()
        L = L + gamma * (2.0 * sp.kron(A, A.conj()) - sp.kron(AdA, I) - sp.kron(I, AdA.T))
    return L.tocsr()


def _check_density_sample(space, m, t, tail):
    if not np.isfinite(m).all():
        raise NumericsError(f"non-finite density entries at t={t}")
    tr = complex(np.trace(m))
    if abs(tr - 1.0) >= TRACE_TOL:
        raise NumericsError(f"trace drift {abs(tr - 1.0):.2e} at t={t} exceeds 1e-8")
    herm = float(np.abs(m - m.conj().T).max())
    if herm >= TRACE_TOL:
        raise NumericsError(f"hermiticity drift {herm:.2e} at t={t} exceeds 1e-8")
    m = 0.5 * (m + m.conj().T)
    m = m / np.trace(m).real
    w, v = np.linalg.eigh(m)
    if w.min() <= -1e-10:
        # integration noise only; anything past the density tolerance is clipped
        w = np.clip(w, 0.0, None)
        m = (v * w) @ v.conj().T
        m = m / np.trace(m).real
    return QuantumState(space, "density", m, tail)


def evolve_lindblad(model: ModelSpec, rho0: QuantumState, times,
                    observables: dict | None = None,
                    rtol: float = 1e-10, atol: float = 1e-12) -> EvolutionResult:
    """Integrate the master equation d rho/dt = -i[H, rho] + sum Lambda.

    Pure initial states are auto-promoted to densities. Trace and
    hermiticity are verified (not repaired beyond 1e-8) at every sample.
    """
    if rho0.space != model.space:
        raise ContractError("state and model live on different spaces")
    rho0 = rho0.as_density_state()
    times = np.atleast_1d(np.asarray(times, dtype=float))
    _require_forward_times(times)
    d = model.space.total_dim
    L = liouvillian(model)
    if np.all(times == 0.0):
        states = [rho0 for _ in times]
        result = EvolutionResult(model, times, states)
        _record_observables(result, observables)
        return result

    def rhs(t, y):
        return L @ y

    sol = solve_ivp(rhs, (0.0, times.max()),
                    rho0.data.reshape(-1).astype(complex),
                    t_eval=times, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise NumericsError(f"Lindblad integration failed: {sol.message}")
    states = [_check_density_sample(model.space, sol.y[:, i].reshape(d, d), t, rho0.tail_mass)
              for i, t in enumerate(times)]
    result = EvolutionResult(model, times, states)
    _record_observables(result, observables)
    return result


def _steady_dense(L: np.ndarray, d: int) -> np.ndarray:
    evals, evecs = np.linalg.eig(L)
    order = np.argsort(np.abs(evals))
    null_count = int(np.sum(np.abs(evals) < 1e-9))
    if null_count > 1:
        raise AmbiguityError(
            f"Liouvillian null space is {null_count}-dimensional; steady state ambiguous")
    v = evecs[:, order[0]]
    return v.reshape(d, d)


def _trace_row_system(L: sp.csr_matrix, d: int, row: int):
    """Copy of L with one row replaced by the Tr(rho) = 1 functional."""
    n2 = d * d
    diag_idx = np.arange(d) * d + np.arange(d)
    C = L.tocoo()
    keep = C.row != row
    rows = np.concatenate([C.row[keep], np.full(d, row, dtype=C.row.dtype)])
    cols = np.concatenate([C.col[keep], diag_idx])
    vals = np.concatenate([C.data[keep], np.ones(d, dtype=complex)])
    A = sp.csc_matrix((vals, (rows, cols)), shape=(n2, n2))
    rhs = np.zeros(n2, dtype=complex)
    rhs[row] = 1.0
    return A, rhs


def _steady_ilu(L: sp.csr_matrix, d: int):
    """Trace-constrained solve: replace one row of L by Tr(rho) = 1,
    precondition with an incomplete LU, and polish with GMRES.

    Returns the solution plus a second solve (same preconditioner,
    constraint placed on a different row) used as a degeneracy probe: for a
    one-dimensional null space both systems share a unique solution.
    """
    n2 = d * d
    A, rhs = _trace_row_system(L, d, 0)
    last_exc = None
    for drop_tol, fill in ((3e-2, 2), (1e-3, 6)):
        try:
            ilu = spla.spilu(A, drop_tol=drop_tol, fill_factor=fill)
            M = spla.LinearOperator((n2, n2), ilu.solve)
            x, info = spla.gmres(A, rhs, M=M, rtol=1e-13, atol=0.0,
                                 restart=100, maxiter=400)
            if info != 0:
                continue
            A2, rhs2 = _trace_row_system(L, d, n2 - 1)
            x2, info2 = spla.gmres(A2, rhs2, M=M, rtol=1e-11, atol=0.0,
                                   restart=100, maxiter=400)
            probe = x2.reshape(d, d) if info2 == 0 else None
            return x.reshape(d, d), probe
        except Exception as exc:  # pragma: no cover - escalation path
            last_exc = exc
    raise NumericsError(f"preconditioned steady-state solve failed: {last_exc}")


def _steady_march(L: sp.csr_matrix, d: int, model: ModelSpec) -> np.ndarray:
    """March exp(L t) from the vacuum until the residual stops improving."""
    v = np.zeros(d * d, dtype=complex)
    v[0] = 1.0
    rates = [g for _, g in model.dissipators if g > 0]
    step = 10.0 / min(rates)
    best = np.inf
    for _ in range(20):
        v = spla.expm_multiply(L * step, v)
        res = float(np.linalg.norm(L @ v) / np.linalg.norm(v))
        if res < 1e-13 or res > 0.9 * best:
            break
        best = res
    return v.reshape(d, d)


def steady_state(model: ModelSpec, method: str = "auto") -> QuantumState:
    """Null vector of the Liouvillian, normalized to trace 1.

    Requires at least one positive-rate dissipator. The returned density
    satisfies ||L(rho)||_F < 1e-10 (Frobenius, trace-normalized); a
    degenerate null space raises AmbiguityError instead of averaging.
    ``method`` may be "auto", "dense", "ilu", or "march".
    """
    if not any(g > 0 for _, g in model.dissipators):
        raise ContractError("steady_state needs at least one dissipator with positive rate")
    d = model.space.total_dim
    L = liouvillian(model)

    if method == "auto":
        method = "dense" if d <= 48 else "ilu"
    probe = None
    if method == "dense":
        rho = _steady_dense(L.toarray(), d)
    elif method == "ilu":
        try:
            rho, probe = _steady_ilu(L, d)
        except NumericsError:
            rho = _steady_march(L, d, model)
    elif method == "march":
        rho = _steady_march(L, d, model)
    else:
        raise ContractError(f"unknown steady-state method {method!r}")

    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if abs(tr) < 1e-14:
        raise NumericsError("steady-state candidate has vanishing trace")
    rho = rho / tr
    residual = float(np.linalg.norm(L @ rho.reshape(-1)))
    if residual >= STEADY_RESIDUAL_TOL:
        raise NumericsError(f"steady-state residual {residual:.2e} exceeds 1e-10")
    if probe is not None:
        probe = 0.5 * (probe + probe.conj().T)
        probe = probe / np.trace(probe).real
        if float(np.abs(probe - rho).max()) > 1e-6:
            raise AmbiguityError("Liouvillian null space appears degenerate (>= 2)")
    w, v = np.linalg.eigh(rho)
    if w.min() <= -1e-10:
        w = np.clip(w, 0.0, None)
        rho = (v * w) @ v.conj().T
        rho = rho / np.trace(rho).real
    return QuantumState(model.space, "density", rho)
