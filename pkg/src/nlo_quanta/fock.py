"""Truncated multimode Fock spaces, bosonic operators, and state algebra.

Conventions
-----------
* Per-mode truncation dims are caller-chosen; every state constructor
  records the probability lost to the truncation (``tail_mass``) so callers
  can assert their own error budgets.
* Flat indexing is row-major with mode 0 slowest: for dims ``(d0, d1, ...)``
  the occupation ``(n0, n1, ...)`` maps to ``n0*d1*d2*... + n1*d2*... + ...``.
* Operators are dense below ``SPARSE_THRESHOLD`` total dimension and
  ``scipy.sparse`` CSR above it; ladder operators are banded and benefit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm

from .errors import (
    ContractError,
    InvalidSpaceError,
    ModeIndexError,
    OutOfRangeError,
    ParameterError,
    TruncationError,
)

SPARSE_THRESHOLD = 256

HERMITICITY_TOL = 1e-12
COHERENT_TAIL_TOL = 1e-10


@dataclass(frozen=True)
class SpaceDescriptor:
    """Tensor product of truncated single-mode Fock spaces.

    Parameters
    ----------
    dims : tuple of int
        Per-mode truncation dimensions, each >= 2. Mode k holds photon
        numbers 0 .. dims[k]-1.
    """

    dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.dims) == 0:
            raise InvalidSpaceError("space needs at least one mode")
        for d in self.dims:
            if int(d) != d or d < 2:
                raise InvalidSpaceError(f"every mode dim must be an integer >= 2, got {d}")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def n_modes(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return prod(self.dims)

    def check_mode(self, mode: int) -> int:
        if not 0 <= mode < self.n_modes:
            raise ModeIndexError(f"mode {mode} out of range for {self.n_modes}-mode space")
        return mode

    def flat_index(self, occupation: Sequence[int]) -> int:
        """Row-major flat index of an occupation tuple (mode 0 slowest)."""
        if len(occupation) != self.n_modes:
            raise ContractError(f"occupation needs {self.n_modes} entries")
        idx = 0
        for n, d in zip(occupation, self.dims):
            if not 0 <= n < d:
                raise OutOfRangeError(f"occupation {n} outside 0..{d - 1}")
            idx = idx * d + n
        return idx

    def occupation_of(self, flat: int) -> tuple[int, ...]:
        occ = []
        for d in reversed(self.dims):
            occ.append(flat % d)
            flat //= d
        return tuple(reversed(occ))

    def number_values(self, mode: int) -> np.ndarray:
        """Photon number of the given mode for every flat basis index."""
        self.check_mode(mode)
        before = prod(self.dims[:mode]) if mode else 1
        after = prod(self.dims[mode + 1:]) if mode + 1 < self.n_modes else 1
        return np.tile(np.repeat(np.arange(self.dims[mode]), after), before)


def make_space(dims: Iterable[int]) -> SpaceDescriptor:
    """Build a SpaceDescriptor from a list of per-mode truncation dims."""
    return SpaceDescriptor(tuple(dims))


def _as_sparse(m) -> sp.csr_matrix:
    return m.tocsr() if sp.issparse(m) else sp.csr_matrix(m)


def _as_dense(m) -> np.ndarray:
    return m.toarray() if sp.issparse(m) else np.asarray(m)


@dataclass(frozen=True)
class FieldOperator:
    """A linear operator on the full tensor-product space.

    ``matrix`` is a dense complex array for small spaces and a CSR sparse
    matrix above ``SPARSE_THRESHOLD``; use :meth:`dense` when a plain array
    is needed.
    """

    space: SpaceDescriptor
    matrix: object  # np.ndarray or scipy.sparse matrix

    def __post_init__(self):
        n = self.space.total_dim
        if self.matrix.shape != (n, n):
            raise ContractError(
                f"operator shape {self.matrix.shape} does not match space dim {n}")

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def dense(self) -> np.ndarray:
        return _as_dense(self.matrix).astype(complex, copy=False)

    def sparse(self) -> sp.csr_matrix:
        return _as_sparse(self.matrix).astype(complex, copy=False)

    def dag(self) -> "FieldOperator":
        return FieldOperator(self.space, self.matrix.conj().T)

    def hermiticity_defect(self) -> float:
        d = self.matrix - self.matrix.conj().T
        return float(np.abs(d.toarray() if sp.issparse(d) else d).max()) if d.shape[0] else 0.0

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return self.hermiticity_defect() < tol

    def __matmul__(self, other: "FieldOperator") -> "FieldOperator":
        if other.space != self.space:
            raise ContractError("operators act on different spaces")
        return FieldOperator(self.space, self.matrix @ other.matrix)

    def __add__(self, other: "FieldOperator") -> "FieldOperator":
        if other.space != self.space:
            raise ContractError("operators act on different spaces")
        return FieldOperator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "FieldOperator") -> "FieldOperator":
        if other.space != self.space:
            raise ContractError("operators act on different spaces")
        return FieldOperator(self.space, self.matrix - other.matrix)

    def __mul__(self, scalar: complex) -> "FieldOperator":
        return FieldOperator(self.space, self.matrix * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "FieldOperator":
        return self * (-1.0)

    def commutator(self, other: "FieldOperator") -> "FieldOperator":
        return self @ other - other @ self

    def max_abs(self) -> float:
        m = self.matrix
        return float(np.abs(m.toarray() if sp.issparse(m) else m).max())


def _pack(space: SpaceDescriptor, mat) -> FieldOperator:
    """Store dense below the sparsity threshold, CSR above it."""
    if space.total_dim > SPARSE_THRESHOLD:
        return FieldOperator(space, _as_sparse(mat))
    return FieldOperator(space, _as_dense(mat).astype(complex, copy=False))


@dataclass(frozen=True)
class QuantumState:
    """A pure state vector or density matrix on a SpaceDescriptor.

    ``tail_mass`` records probability discarded by the constructor's
    truncation (0 for exact constructions like Fock states).
    """

    space: SpaceDescriptor
    kind: str  # "pure" | "density"
    data: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        n = self.space.total_dim
        if self.kind == "pure":
            if self.data.shape != (n,):
                raise ContractError(f"pure state must be a length-{n} vector")
            nrm = float(np.linalg.norm(self.data))
            if abs(nrm - 1.0) >= 1e-10:
                raise ContractError(f"pure state norm {nrm} deviates from 1 beyond 1e-10")
        elif self.kind == "density":
            if self.data.shape != (n, n):
                raise ContractError(f"density matrix must be {n}x{n}")
            tr = complex(np.trace(self.data))
            if abs(tr - 1.0) >= 1e-10:
                raise ContractError(f"density trace {tr} deviates from 1 beyond 1e-10")
            herm = float(np.abs(self.data - self.data.conj().T).max())
            if herm >= HERMITICITY_TOL:
                raise ContractError(f"density hermiticity defect {herm} beyond 1e-12")
            evmin = float(np.linalg.eigvalsh(self.data).min())
            if evmin <= -1e-10:
                raise ContractError(f"density has negative eigenvalue {evmin}")
        else:
            raise ContractError(f"unknown state kind {self.kind!r}")

    @property
    def is_pure(self) -> bool:
        return self.kind == "pure"

    def density(self) -> np.ndarray:
        """Density matrix view of the state (outer product for pure states)."""
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def as_density_state(self) -> "QuantumState":
        if self.is_pure:
            return QuantumState(self.space, "density", self.density(), self.tail_mass)
        return self


# ---------------------------------------------------------------------------
# operators


def _single_mode_lowering(dim: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, dim)), 1, format="csr", dtype=complex)


def _embed(space: SpaceDescriptor, mode: int, op1: sp.spmatrix) -> sp.csr_matrix:
    space.check_mode(mode)
    mat = sp.identity(1, format="csr", dtype=complex)
    for k, d in enumerate(space.dims):
        factor = op1 if k == mode else sp.identity(d, format="csr", dtype=complex)
        mat = sp.kron(mat, factor, format="csr")
    return mat


def annihilation(space: SpaceDescriptor, mode: int = 0) -> FieldOperator:
    """Lowering operator a on the given mode: a|n> = sqrt(n)|n-1>."""
    space.check_mode(mode)
    return _pack(space, _embed(space, mode, _single_mode_lowering(space.dims[mode])))


def creation(space: SpaceDescriptor, mode: int = 0) -> FieldOperator:
    """Raising operator a-dagger on the given mode."""
    return annihilation(space, mode).dag()


def number_operator(space: SpaceDescriptor, mode: int = 0) -> FieldOperator:
    """Photon number operator a-dagger a; diagonal and hermitian."""
    space.check_mode(mode)
    return _pack(space, sp.diags(space.number_values(mode).astype(complex), 0, format="csr"))


def identity_operator(space: SpaceDescriptor) -> FieldOperator:
    return _pack(space, sp.identity(space.total_dim, format="csr", dtype=complex))


def quadrature(space: SpaceDescriptor, mode: int, phi: float) -> FieldOperator:
    """Quadrature X(phi) = (e^{i phi} a-dag + e^{-i phi} a)/2.

    X(0) and X(pi/2) are the real and imaginary parts of a; the vacuum
    variance is 1/4 for every phi.
    """
    a = annihilation(space, mode)
    mat = 0.5 * (np.exp(1j * phi) * a.dag().matrix + np.exp(-1j * phi) * a.matrix)
    return _pack(space, mat)


def mode_rotation(space: SpaceDescriptor, mode: int, theta: float) -> FieldOperator:
    """Phase-space rotation exp(i theta n) on one mode; diagonal unitary."""
    space.check_mode(mode)
    ph = np.exp(1j * theta * space.number_values(mode))
    return _pack(space, sp.diags(ph, 0, format="csr"))


def beam_splitter(space: SpaceDescriptor, transmissivity: float) -> FieldOperator:
    """Two-mode beam-splitter unitary with transmissivity T.

    Realized as exp[theta (a-dag b - a b-dag)] with theta = arccos(sqrt T),
    which conjugates the mode operators as

        U-dag a U = sqrt(T) a + sqrt(R) b
        U-dag b U = -sqrt(R) a + sqrt(T) b,      R = 1 - T.

    The generator conserves total photon number, so the exponential is taken
    block-by-block over the n_a + n_b sectors; the conjugation relations are
    exact on every sector that is complete under the truncation.
    """
    if space.n_modes != 2:
        raise ContractError("beam_splitter needs a two-mode space")
    if not 0.0 <= transmissivity <= 1.0:
        raise ParameterError(f"transmissivity {transmissivity} outside [0, 1]")
    theta = float(np.arccos(np.sqrt(transmissivity)))
    a = annihilation(space, 0).sparse()
    b = annihilation(space, 1).sparse()
    K = (a.conj().T @ b - a @ b.conj().T) * theta
    totals = space.number_values(0) + space.number_values(1)
    n = space.total_dim
    rows, cols, vals = [], [], []
    Kd = K.toarray()
    for N in range(int(totals.max()) + 1):
        idx = np.nonzero(totals == N)[0]
        block = expm(Kd[np.ix_(idx, idx)])
        rr, cc = np.meshgrid(idx, idx, indexing="ij")
        rows.append(rr.ravel())
        cols.append(cc.ravel())
        vals.append(block.ravel())
    U = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    )
    return _pack(space, U)


# ---------------------------------------------------------------------------
# states


def fock_state(space: SpaceDescriptor, occupation: Sequence[int]) -> QuantumState:
    """Unit basis vector |n0, n1, ...>."""
    vec = np.zeros(space.total_dim, dtype=complex)
    vec[space.flat_index(occupation)] = 1.0
    return QuantumState(space, "pure", vec, tail_mass=0.0)


def vacuum_state(space: SpaceDescriptor) -> QuantumState:
    return fock_state(space, (0,) * space.n_modes)


def _coherent_amplitudes(alpha: complex, dim: int) -> tuple[np.ndarray, float]:
    """Truncated coherent amplitudes and the Poisson tail mass beyond dim."""
    amps = np.empty(dim, dtype=complex)
    amps[0] = 1.0
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / np.sqrt(n)
    amps *= np.exp(-abs(alpha) ** 2 / 2.0)
    kept = float(np.sum(np.abs(amps) ** 2))
    return amps, max(0.0, 1.0 - kept)


def coherent_state(
    space: SpaceDescriptor,
    mode_amplitudes: Sequence[complex],
    tail_tol: float = COHERENT_TAIL_TOL,
) -> QuantumState:
    """Normalized truncated tensor product of coherent states |alpha_k>.

    Raises TruncationError naming the first mode whose Poisson tail beyond
    its truncation dim exceeds ``tail_tol``.
    """
    if len(mode_amplitudes) != space.n_modes:
        raise ContractError(f"need {space.n_modes} amplitudes")
    vec = np.ones(1, dtype=complex)
    total_tail = 0.0
    for k, (alpha, dim) in enumerate(zip(mode_amplitudes, space.dims)):
        amps, tail = _coherent_amplitudes(complex(alpha), dim)
        if tail > tail_tol:
            raise TruncationError(
                f"mode {k}: coherent tail mass {tail:.3e} exceeds tolerance {tail_tol:.1e} "
                f"(|alpha|={abs(alpha):.3g}, dim={dim})")
        total_tail += tail
        vec = np.kron(vec, amps)
    vec = vec / np.linalg.norm(vec)
    return QuantumState(space, "pure", vec, tail_mass=total_tail)


def thermal_state(space: SpaceDescriptor, mean_occupations: Sequence[float]) -> QuantumState:
    """Truncated tensor product of thermal (geometric) density matrices."""
    if len(mean_occupations) != space.n_modes:
        raise ContractError(f"need {space.n_modes} occupations")
    rho = np.ones((1, 1), dtype=complex)
    tail_total = 0.0
    for nbar, dim in zip(mean_occupations, space.dims):
        if nbar < 0:
            raise ParameterError("thermal occupation must be >= 0")
        n = np.arange(dim)
        p = (nbar / (1.0 + nbar)) ** n / (1.0 + nbar) if nbar > 0 else (n == 0).astype(float)
        tail_total += max(0.0, 1.0 - p.sum())
        p = p / p.sum()
        rho = np.kron(rho, np.diag(p.astype(complex)))
    return QuantumState(space, "density", rho, tail_mass=tail_total)


def apply_operator(op: FieldOperator, state: QuantumState, renormalize: bool = True) -> QuantumState:
    """Apply an operator to a state (U|psi> or U rho U-dag)."""
    if op.space != state.space:
        raise ContractError("operator and state live on different spaces")
    if state.is_pure:
        vec = op.matrix @ state.data
        if renormalize:
            vec = vec / np.linalg.norm(vec)
        return QuantumState(state.space, "pure", np.asarray(vec).ravel(), state.tail_mass)
    m = op.matrix @ state.data @ op.matrix.conj().T
    m = _as_dense(m)
    if renormalize:
        m = m / np.trace(m).real
    return QuantumState(state.space, "density", 0.5 * (m + m.conj().T), state.tail_mass)


# ---------------------------------------------------------------------------
# expectations


def expectation(state: QuantumState, op: FieldOperator) -> complex:
    """<psi|O|psi> for pure states, Tr(rho O) for densities."""
    if op.space != state.space:
        raise ContractError("operator and state live on different spaces")
    if state.is_pure:
        return complex(np.vdot(state.data, op.matrix @ state.data))
    prod_ = op.matrix @ state.data
    if sp.issparse(prod_):
        return complex(prod_.diagonal().sum())
    return complex(np.trace(prod_))


def variance(state: QuantumState, op: FieldOperator) -> float:
    """<O^2> - <O>^2 for hermitian O (real by construction)."""
    if not op.is_hermitian():
        raise ContractError("variance requires a hermitian operator")
    if state.is_pure:
        ov = op.matrix @ state.data
        m2 = float(np.real(np.vdot(ov, ov)))
        m1 = float(np.real(np.vdot(state.data, ov)))
    else:
        m1 = expectation(state, op).real
        m2 = expectation(state, op @ op).real
    return m2 - m1 * m1


def partial_trace(state: QuantumState, keep_modes: Sequence[int]) -> QuantumState:
    """Reduced density matrix over the kept modes (in their original order)."""
    keep = sorted(set(int(m) for m in keep_modes))
    if not keep:
        raise ContractError("keep_modes must be nonempty")
    for m in keep:
        state.space.check_mode(m)
    dims = state.space.dims
    traced = [m for m in range(len(dims)) if m not in keep]
    rho = state.density().reshape(dims + dims)
    n = len(dims)
    for m in sorted(traced, reverse=True):
        rho = np.trace(rho, axis1=m, axis2=m + n)
        n -= 1
    kept_dims = tuple(dims[m] for m in keep)
    d = prod(kept_dims)
    rho = rho.reshape(d, d)
    rho = 0.5 * (rho + rho.conj().T)
    return QuantumState(make_space(kept_dims), "density", rho, state.tail_mass)
