"""n-qubit X/Z Pauli strings, dense operators and code-space restriction.

Qubit order: qubit ``k`` (1-based) is stored in bit ``k - 1`` of a basis
index and of a Pauli mask. A ket written ``|q1 q2 ... qn>`` therefore has
index ``sum(q_k << (k - 1))``, and a dense operator on n qubits is
``kron(A_n, ..., A_2, A_1)``.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

MAX_QUBITS = 10
ATOL = 1e-12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def check_qubits(n):
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be an integer in 1..{MAX_QUBITS}, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class PauliString:
    """Pure X-type, pure Z-type or identity Pauli string on ``n`` qubits."""

    n: int
    x_mask: int = 0
    z_mask: int = 0

    def __post_init__(self):
        check_qubits(self.n)
        full = (1 << self.n) - 1
        for mask in (self.x_mask, self.z_mask):
            if mask < 0 or mask & ~full:
                raise ValueError(f"mask {mask:#b} does not fit in {self.n} qubits")
        if self.x_mask and self.z_mask:
            raise ValueError("mixed X/Z strings are not supported")

    @classmethod
    def from_pattern(cls, n, pattern, flip_type="bit"):
        if flip_type == "bit":
            return cls(n, x_mask=pattern)
        if flip_type == "phase":
            return cls(n, z_mask=pattern)
        raise ValueError(f"unknown flip type {flip_type!r}")

    @property
    def dim(self):
        return 1 << self.n

    def apply(self, basis_index):
        """Image of a computational basis state: ``(new_index, phase)``."""
        if not 0 <= basis_index < self.dim:
            raise IndexError(f"basis index {basis_index} out of range for {self.n} qubits")
        phase = -1 if bin(self.z_mask & basis_index).count("1") & 1 else 1
        return basis_index ^ self.x_mask, phase

    def apply_vector(self, amps):
        amps = np.asarray(amps)
        idx = np.arange(self.dim)
        out = np.empty_like(amps, dtype=complex)
        out[idx ^ self.x_mask] = amps * phase_signs(self.z_mask, self.dim)
        return out

    def matrix(self):
        """Dense ``2^n x 2^n`` matrix, built from the bitmask action."""
        dim = self.dim
        m = np.zeros((dim, dim), dtype=complex)
        idx = np.arange(dim)
        m[idx ^ self.x_mask, idx] = phase_signs(self.z_mask, dim)
        return m

    def kron_matrix(self):
        """Dense matrix from explicit Kronecker products (slow reference)."""
        factors = []
        for k in range(self.n, 0, -1):
            bit = 1 << (k - 1)
            if self.x_mask & bit:
                factors.append(X)
            elif self.z_mask & bit:
                factors.append(Z)
            else:
                factors.append(I2)
        return reduce(np.kron, factors)


def phase_signs(z_mask, dim):
    idx = np.arange(dim)
    v = idx & z_mask
    parity = np.zeros(dim, dtype=np.int64)
    while np.any(v):
        parity ^= v & 1
        v >>= 1
    return 1 - 2 * parity


def basis_state(n, index):
    v = np.zeros(1 << check_qubits(n), dtype=complex)
    v[index] = 1.0
    return v


def ket(bits):
    """State vector from a label such as ``"100"`` or ``"+-+"`` (qubit 1 leftmost)."""
    single = {
        "0": np.array([1, 0], dtype=complex),
        "1": np.array([0, 1], dtype=complex),
        "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
        "-": np.array([1, -1], dtype=complex) / np.sqrt(2),
    }
    return reduce(np.kron, [single[c] for c in reversed(bits)])


def embed(op, qubit, n):
    """Single-qubit operator acting on ``qubit`` (1-based) of ``n`` qubits."""
    factors = [op if k == qubit else I2 for k in range(n, 0, -1)]
    return reduce(np.kron, factors)


def cnot_unitary(control, target, n):
    """CNOT from ``control`` to ``target``: ((I+Z_c) + (I-Z_c) X_t) / 2."""
    n = check_qubits(n)
    if not (1 <= control <= n and 1 <= target <= n):
        raise ValueError(f"qubits must lie in 1..{n}")
    if control == target:
        raise ValueError("control and target must differ")
    dim = 1 << n
    ident = np.eye(dim, dtype=complex)
    zc = embed(Z, control, n)
    xt = embed(X, target, n)
    return 0.5 * ((ident + zc) + (ident - zc) @ xt)


def hadamard_all(n):
    return reduce(np.kron, [H] * check_qubits(n))


def projector(*vectors):
    return sum(np.outer(v, v.conj()) for v in vectors)


def is_unitary(u, atol=ATOL):
    return np.allclose(u.conj().T @ u, np.eye(u.shape[0]), rtol=0, atol=atol)


def restricted_matrix(op, code):
    """2x2 matrix ``<i_L| op |j_L>`` of ``op`` on the code space."""
    op = np.asarray(op)
    if op.shape != (code.dim, code.dim):
        raise ValueError(f"operator shape {op.shape} does not match {code.n}-qubit code")
    basis = np.stack([code.zero_logical, code.one_logical])
    return basis.conj() @ op @ basis.T
