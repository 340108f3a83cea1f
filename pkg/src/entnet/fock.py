"""Dense linear algebra on truncated multi-mode bosonic Fock spaces.

Every mode is truncated to the levels |0>..|dim-1>.  Multi-mode objects live
on the Kronecker-product basis in fixed mode order: mode 0 is the leftmost
(most significant) tensor factor, so the basis index of |n0, n1, ...> is
n0*dim**(m-1) + n1*dim**(m-2) + ...

Basis sizes in this package stay tiny (dim**4 <= a few thousand), so all
storage is dense and all operations are pure functions of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

# Refuse tensor products whose result would not comfortably fit in memory.
MAX_TENSOR_SIZE = 2**24


@dataclass(frozen=True)
class TruncatedSpace:
    """A truncated Fock space: `n_modes` modes with `dim` levels each."""

    dim: int
    n_modes: int = 1

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"Fock cutoff must be at least 2, got dim={self.dim}")
        if self.n_modes < 1:
            raise ValueError(f"need at least one mode, got n_modes={self.n_modes}")

    @property
    def size(self) -> int:
        """Total basis size dim**n_modes."""
        return self.dim**self.n_modes


@dataclass(frozen=True, eq=False)
class Operator:
    """A dense complex operator on a TruncatedSpace."""

    space: TruncatedSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.size, self.space.size):
            raise ValueError(
                f"operator shape {m.shape} does not match space size {self.space.size}"
            )
        object.__setattr__(self, "matrix", m)

    def dagger(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)

    def __add__(self, other: "Operator") -> "Operator":
        self._check_same_space(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_same_space(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.space, self.matrix * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_same_space(other)
        return Operator(self.space, self.matrix @ other.matrix)

    def _check_same_space(self, other: "Operator") -> None:
        if other.space != self.space:
            raise ValueError(f"space mismatch: {self.space} vs {other.space}")


@dataclass(frozen=True, eq=False)
class StateVector:
    """A pure state on a TruncatedSpace."""

    space: TruncatedSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if a.shape != (self.space.size,):
            raise ValueError(
                f"state length {a.shape[0]} does not match space size {self.space.size}"
            )
        object.__setattr__(self, "amplitudes", a)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.space, self.amplitudes / n)

    def probabilities(self) -> np.ndarray:
        """|amplitude|^2 for every basis configuration."""
        return np.abs(self.amplitudes) ** 2


def annihilation(space: TruncatedSpace) -> Operator:
    """Single-mode annihilation operator: sqrt(n) at (n-1, n), top level cut."""
    if space.n_modes != 1:
        raise ValueError("annihilation is defined on a single-mode space")
    return Operator(space, np.diag(np.sqrt(np.arange(1, space.dim)), 1))


def creation(space: TruncatedSpace) -> Operator:
    """Single-mode creation operator, the adjoint of annihilation."""
    return annihilation(space).dagger()


def number(space: TruncatedSpace) -> Operator:
    """Single-mode photon-number operator diag(0, 1, ..., dim-1)."""
    if space.n_modes != 1:
        raise ValueError("number is defined on a single-mode space")
    return Operator(space, np.diag(np.arange(space.dim, dtype=float)))


def identity(space: TruncatedSpace) -> Operator:
    return Operator(space, np.eye(space.size))


def vacuum_state(space: TruncatedSpace) -> StateVector:
    amps = np.zeros(space.size, dtype=complex)
    amps[0] = 1.0
    return StateVector(space, amps)


def fock_state(space: TruncatedSpace, occupations) -> StateVector:
    """Basis state |n0, n1, ...> for the given per-mode occupations."""
    occ = tuple(int(n) for n in np.atleast_1d(occupations))
    if len(occ) != space.n_modes:
        raise ValueError(f"expected {space.n_modes} occupations, got {len(occ)}")
    if any(n < 0 or n >= space.dim for n in occ):
        raise ValueError(f"occupations {occ} outside 0..{space.dim - 1}")
    index = 0
    for n in occ:
        index = index * space.dim + n
    amps = np.zeros(space.size, dtype=complex)
    amps[index] = 1.0
    return StateVector(space, amps)


def _product_space(spaces) -> TruncatedSpace:
    dims = {s.dim for s in spaces}
    if len(dims) != 1:
        raise ValueError(f"tensor factors must share one Fock cutoff, got dims {sorted(dims)}")
    n_modes = sum(s.n_modes for s in spaces)
    space = TruncatedSpace(dims.pop(), n_modes)
    if space.size > MAX_TENSOR_SIZE:
        raise ValueError(f"tensor product size {space.size} exceeds limit {MAX_TENSOR_SIZE}")
    return space


def tensor(*ops: Operator) -> Operator:
    """Kronecker product of operators, in argument order."""
    if not ops:
        raise ValueError("tensor of zero operators")
    space = _product_space([op.space for op in ops])
    matrix = reduce(np.kron, [op.matrix for op in ops])
    return Operator(space, matrix)


def tensor_state(*states: StateVector) -> StateVector:
    """Kronecker product of state vectors, in argument order."""
    if not states:
        raise ValueError("tensor of zero states")
    space = _product_space([s.space for s in states])
    amps = reduce(np.kron, [s.amplitudes for s in states])
    return StateVector(space, amps)


def permute_modes(state: StateVector, perm) -> StateVector:
    """Reorder the modes of a multi-mode state.

    `perm` lists, for each output mode position, which input mode supplies it
    (axes argument of numpy.transpose on the occupation grid).  The l2 norm is
    preserved exactly since amplitudes are only moved.
    """
    perm = tuple(int(p) for p in perm)
    n = state.space.n_modes
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of 0..{n - 1}")
    d = state.space.dim
    grid = state.amplitudes.reshape((d,) * n)
    return StateVector(state.space, grid.transpose(perm).reshape(-1))


def expm(op: Operator) -> Operator:
    """Matrix exponential (scaling-and-squaring via scipy)."""
    if not np.all(np.isfinite(op.matrix)):
        raise ValueError("matrix exponential of non-finite operator")
    return Operator(op.space, scipy.linalg.expm(op.matrix))


def expectation(op: Operator, state: StateVector) -> complex:
    """<psi|O|psi> for a (not necessarily normalized) state."""
    if op.space != state.space:
        raise ValueError(f"space mismatch: {op.space} vs {state.space}")
    return complex(np.vdot(state.amplitudes, op.matrix @ state.amplitudes))
