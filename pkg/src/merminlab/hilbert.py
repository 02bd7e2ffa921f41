"""Dense statevector engine for small multi-qubit systems.

Conventions used throughout the package: party 1 occupies the most
significant bit of the computational-basis index, and bit value 0 is the
spin-up state along z.  Angles are radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ALGEBRA_TOL",
    "REALNESS_TOL",
    "AngleTheta",
    "LinearOperator",
    "NumericalError",
    "Projection",
    "StateVector",
    "IDENTITY_2",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "expectation",
    "ghz_state",
    "lift",
    "project",
    "tensor",
]

# Algebraic identities (norms, involutions, hermiticity) are checked at
# 1e-12; realness of expectation values at 1e-10.  Both sit one to two
# orders above double-precision accumulation error on dim-8 problems.
ALGEBRA_TOL = 1e-12
REALNESS_TOL = 1e-10

MAX_QUBITS = 12

# The nonlocality argument under study lives on the open interval
# (0, pi/4); the workbench accepts [0, pi/2] and flags everything else
# in reports.
CANONICAL_DOMAIN = (0.0, math.pi / 4)


class NumericalError(ArithmeticError):
    """A numeric result violated an exactness contract (e.g. complex residue)."""


@dataclass(frozen=True)
class AngleTheta:
    """Entanglement angle in radians, restricted to the workbench domain [0, pi/2]."""

    radians: float

    def __post_init__(self) -> None:
        r = float(self.radians)
        if not math.isfinite(r) or not 0.0 <= r <= math.pi / 2:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.radians!r}")
        object.__setattr__(self, "radians", r)

    @classmethod
    def from_degrees(cls, degrees: float) -> "AngleTheta":
        return cls(math.radians(degrees))

    @property
    def degrees(self) -> float:
        return math.degrees(self.radians)

    @property
    def outside_canonical_domain(self) -> bool:
        lo, hi = CANONICAL_DOMAIN
        return not lo < self.radians < hi


def _as_radians(theta: AngleTheta | float) -> float:
    if isinstance(theta, AngleTheta):
        return theta.radians
    return float(theta)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized complex amplitude vector over ``n_qubits`` qubits."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        n = int(self.n_qubits)
        if n < 1 or n > MAX_QUBITS:
            raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}, got {self.n_qubits}")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != 2**n:
            raise ValueError(
                f"expected {2**n} amplitudes for {n} qubits, got {amps.shape[0]}"
            )
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > ALGEBRA_TOL:
            raise ValueError(f"state is not normalized: |norm^2 - 1| = {abs(norm_sq - 1.0):.3e}")
        amps.setflags(write=False)
        object.__setattr__(self, "n_qubits", n)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @classmethod
    def normalize(cls, n_qubits: int, amplitudes: np.ndarray) -> "StateVector":
        """Construct from an arbitrary nonzero vector, dividing out its norm."""
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(amps))
        if norm <= 0.0:
            raise ValueError("cannot normalize a zero vector")
        return cls(n_qubits, amps / norm)


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """Dense square operator on a 2^k-dimensional space with optional contract flags.

    ``hermitian`` asserts equality with the conjugate transpose and
    ``dichotomic`` asserts that the operator squares to the identity; both
    are verified at construction within ``ALGEBRA_TOL`` unless the caller
    passes ``trusted=True`` (used internally where the flags are preserved
    by construction, e.g. tensor products).
    """

    entries: np.ndarray
    hermitian: bool = False
    dichotomic: bool = False
    trusted: bool = field(default=False, repr=False)

    def __post_init__(self) -> None:
        mat = np.array(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator entries must be square, got shape {mat.shape}")
        dim = mat.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise ValueError(f"operator dimension must be a power of 2, got {dim}")
        if not self.trusted:
            if self.hermitian and np.abs(mat - mat.conj().T).max() > ALGEBRA_TOL:
                raise ValueError("operator flagged hermitian is not self-adjoint")
            if self.dichotomic:
                residue = np.abs(mat @ mat - np.eye(dim)).max()
                if residue > ALGEBRA_TOL:
                    raise ValueError(
                        f"operator flagged dichotomic does not square to identity "
                        f"(residue {residue:.3e})"
                    )
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


IDENTITY_2 = LinearOperator(np.eye(2), hermitian=True, dichotomic=True)
SIGMA_X = LinearOperator([[0, 1], [1, 0]], hermitian=True, dichotomic=True)
SIGMA_Y = LinearOperator([[0, -1j], [1j, 0]], hermitian=True, dichotomic=True)
SIGMA_Z = LinearOperator([[1, 0], [0, -1]], hermitian=True, dichotomic=True)


def ghz_state(theta: AngleTheta | float, n_qubits: int = 3) -> StateVector:
    """Generalized GHZ state cos(theta)|0..0> + i sin(theta)|1..1>.

    The relative phase factor i is part of the construction and is never
    normalized away; the settings reconstruction depends on it.
    """
    n = int(n_qubits)
    if n < 2:
        raise ValueError(f"ghz_state needs at least 2 qubits, got {n_qubits}")
    if n > MAX_QUBITS:
        raise ValueError(f"ghz_state supports at most {MAX_QUBITS} qubits, got {n}")
    t = _as_radians(theta)
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = math.cos(t)
    amps[-1] = 1j * math.sin(t)
    return StateVector(n, amps)


def tensor(*ops: LinearOperator) -> LinearOperator:
    """Tensor (Kronecker) product, left factor on the most significant bits."""
    if not ops:
        raise ValueError("tensor requires at least one operator")
    mat = ops[0].entries
    for op in ops[1:]:
        mat = np.kron(mat, op.entries)
    # Kronecker products preserve both contract flags.
    return LinearOperator(
        mat,
        hermitian=all(op.hermitian for op in ops),
        dichotomic=all(op.dichotomic for op in ops),
        trusted=True,
    )


def lift(single: LinearOperator, party: int, n_qubits: int) -> LinearOperator:
    """Embed a one-qubit operator at the given party (1-based), identity elsewhere."""
    if single.dim != 2:
        raise ValueError(f"lift expects a single-qubit operator, got dim {single.dim}")
    n = int(n_qubits)
    if not 1 <= party <= n:
        raise ValueError(f"party must be in 1..{n}, got {party}")
    left, right = party - 1, n - party
    mat = single.entries
    if left:
        mat = np.kron(np.eye(2**left), mat)
    if right:
        mat = np.kron(mat, np.eye(2**right))
    return LinearOperator(
        mat, hermitian=single.hermitian, dichotomic=single.dichotomic, trusted=True
    )


def expectation(state: StateVector, op: LinearOperator) -> float:
    """Real expectation value <psi|O|psi> of a Hermitian operator."""
    if not op.hermitian:
        raise ValueError("expectation requires an operator flagged hermitian")
    if op.dim != state.dim:
        raise ValueError(f"dimension mismatch: state {state.dim}, operator {op.dim}")
    value = complex(np.vdot(state.amplitudes, op.entries @ state.amplitudes))
    if abs(value.imag) >= REALNESS_TOL:
        raise NumericalError(
            f"expectation value has imaginary residue {value.imag:.3e}; "
            "a non-Hermitian operator slipped through"
        )
    return value.real


@dataclass(frozen=True)
class Projection:
    """Outcome probability and (when realizable) the post-measurement state."""

    probability: float
    post_state: StateVector | None


def project(state: StateVector, op: LinearOperator, outcome: int) -> Projection:
    """Project onto the +/-1 eigenspace of a dichotomic observable.

    Returns ``post_state=None`` when the outcome probability is below
    1e-12: a zero-probability branch has no post-measurement state and
    callers must handle the degenerate conditioning explicitly.
    """
    if not op.dichotomic:
        raise ValueError("project requires an operator flagged dichotomic")
    if op.dim != state.dim:
        raise ValueError(f"dimension mismatch: state {state.dim}, operator {op.dim}")
    if outcome not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome}")
    projected = 0.5 * (state.amplitudes + outcome * (op.entries @ state.amplitudes))
    probability = float(np.vdot(projected, projected).real)
    probability = min(max(probability, 0.0), 1.0)
    if probability <= 1e-12:
        return Projection(probability, None)
    post = StateVector(state.n_qubits, projected / math.sqrt(probability))
    return Projection(probability, post)
