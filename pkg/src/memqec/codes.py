"""Repetition codes and decoherence-free-subspace codes on n qubits."""

from dataclasses import dataclass, field

import numpy as np

from memqec.channel import FLIP_TYPES, KrausTerm, MarkovChannel
from memqec.pauli import basis_state, check_qubits, cnot_unitary, hadamard_all, projector

FAMILIES = ("rc", "dfs")


@dataclass(frozen=True, eq=False)
class Code:
    """One logical qubit in ``n`` physical qubits.

    ``flip_basis`` names the channel the code is meant for: ``"bit"`` for
    X-type errors, ``"phase"`` for Z-type errors.
    """

    n: int
    family: str
    flip_basis: str
    zero_logical: np.ndarray = field(repr=False)
    one_logical: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return 1 << self.n

    @property
    def codewords(self):
        return np.stack([self.zero_logical, self.one_logical])

    @property
    def projector(self):
        return projector(self.zero_logical, self.one_logical)

    @property
    def hadamard_conjugated(self):
        # RC-bit codewords are computational; DFS-bit codewords are |+>/|-> products
        return (self.family == "rc") == (self.flip_basis == "phase")

    def channel(self, mu=None, p=None):
        return MarkovChannel(self.n, self.flip_basis, mu, p)


def _check(n, flip_basis):
    n = check_qubits(n)
    if n < 2:
        raise ValueError("a code needs at least 2 physical qubits")
    if flip_basis not in FLIP_TYPES:
        raise ValueError(f"flip_basis must be one of {FLIP_TYPES}")
    return n


def _product_codewords(n, hadamard):
    dim = 1 << n
    zero, one = basis_state(n, 0), basis_state(n, dim - 1)
    if hadamard:
        h = hadamard_all(n)
        zero, one = h @ zero, h @ one
    return zero, one


def repetition_code(n, flip_basis="bit"):
    """|0...0>, |1...1> for bit flips; |+...+>, |-...-> for phase flips."""
    n = _check(n, flip_basis)
    zero, one = _product_codewords(n, hadamard=flip_basis == "phase")
    return Code(n, "rc", flip_basis, zero, one)


def dfs_code(n, flip_basis="bit"):
    """|+...+>, |-...-> for bit flips; the Hadamard image |0...0>, |1...1> for phase flips."""
    n = _check(n, flip_basis)
    zero, one = _product_codewords(n, hadamard=flip_basis == "bit")
    return Code(n, "dfs", flip_basis, zero, one)


def make_code(family, n, flip_basis="bit"):
    if family == "rc":
        return repetition_code(n, flip_basis)
    if family == "dfs":
        return dfs_code(n, flip_basis)
    raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")


def encoding_unitary(code):
    """CNOT fan-out from qubit 1 to qubits 2..n, followed by H on every qubit
    when the codewords live in the |+>/|-> basis.

    Maps ``|b 0 ... 0>`` (qubit 1 carries b) to the logical ``|b_L>``.
    """
    u = np.eye(code.dim, dtype=complex)
    for target in range(2, code.n + 1):
        u = cnot_unitary(1, target, code.n) @ u
    if code.hadamard_conjugated:
        u = hadamard_all(code.n) @ u
    return u


def conjugate_channel(channel):
    """Hadamard-conjugated channel: bit flips become phase flips and back.

    Pattern weights are unchanged since ``H X H = Z``.
    """
    other = "phase" if channel.flip_type == "bit" else "bit"
    return MarkovChannel(channel.n, other, channel.mu, channel.p)


def conjugate_terms(terms):
    """Conjugate explicit Kraus terms by ``H^{(x)n}``; returns (terms, dense ops).

    The dense operators are computed as ``H A H`` so callers can compare them
    with the terms' own Pauli matrices.
    """
    if not terms:
        return [], []
    n = terms[0].n
    h = hadamard_all(n)
    out_terms, out_ops = [], []
    for t in terms:
        other = "phase" if t.flip_type == "bit" else "bit"
        out_terms.append(KrausTerm(n, t.pattern, t.weight, other))
        out_ops.append(h @ t.pauli.matrix() @ h)
    return out_terms, out_ops
