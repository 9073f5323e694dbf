"""Markov-correlated bit-flip / phase-flip channels as Kraus decompositions.

The error pattern of an n-qubit channel is an n-bit mask whose bit ``k - 1``
says whether qubit ``k`` is flipped. Its probability is the Markov chain

    p(i_1) * p(i_2 | i_1) * ... * p(i_n | i_{n-1})

running from qubit 1 to qubit n, with ``p(b | a) = (1 - mu) p_b + mu [a == b]``.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from memqec.bipoly import BiPoly, marginal, transition_factor
from memqec.pauli import PauliString, check_qubits, phase_signs

FLIP_TYPES = ("bit", "phase")


@dataclass(frozen=True)
class KrausTerm:
    """One Kraus operator ``sqrt(weight) * P`` of a correlated flip channel."""

    n: int
    pattern: int
    weight: object  # BiPoly (symbolic) or float (numeric)
    flip_type: str = "bit"

    @property
    def pauli(self):
        return PauliString.from_pattern(self.n, self.pattern, self.flip_type)

    @property
    def symbolic(self):
        return isinstance(self.weight, BiPoly)

    def probability(self, mu=None, p=None):
        if self.symbolic:
            if mu is None or p is None:
                raise ValueError("symbolic weight needs (mu, p) to evaluate")
            return float(self.weight.eval(mu, p))
        return float(self.weight)

    def operator(self, mu=None, p=None):
        return np.sqrt(self.probability(mu, p)) * self.pauli.matrix()

    @property
    def label(self):
        """Binary pattern with qubit 1 leftmost, e.g. ``"100"`` for X on qubit 1."""
        return pattern_label(self.pattern, self.n)


def pattern_label(pattern, n):
    return "".join("1" if pattern >> k & 1 else "0" for k in range(n))


def popcount(x):
    return bin(x).count("1")


@lru_cache(maxsize=None)
def symbolic_weights(n):
    """Exact weights of all ``2^n`` patterns, indexed by pattern value."""
    n = check_qubits(n)
    weights = [marginal(0), marginal(1)]
    for k in range(1, n):
        # bit k is qubit k + 1; its predecessor in the chain is bit k - 1
        step = [None] * (1 << (k + 1))
        for pattern, w in enumerate(weights):
            prev = pattern >> (k - 1) & 1
            step[pattern] = w * transition_factor(prev, 0)
            step[pattern | 1 << k] = w * transition_factor(prev, 1)
        weights = step
    return tuple(weights)


def check_probability(name, value):
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class MarkovChannel:
    """Correlated flip channel on ``n`` qubits.

    Leave ``mu`` and ``p`` unset for a symbolic channel whose Kraus weights
    are ``BiPoly`` objects; set both for numeric float weights.
    """

    n: int
    flip_type: str = "bit"
    mu: float = None
    p: float = None

    def __post_init__(self):
        check_qubits(self.n)
        if self.flip_type not in FLIP_TYPES:
            raise ValueError(f"flip_type must be one of {FLIP_TYPES}")
        if (self.mu is None) != (self.p is None):
            raise ValueError("give both mu and p for a numeric channel, or neither")
        if self.mu is not None:
            object.__setattr__(self, "mu", check_probability("mu", self.mu))
            object.__setattr__(self, "p", check_probability("p", self.p))

    @property
    def numeric(self):
        return self.mu is not None

    @property
    def dim(self):
        return 1 << self.n

    def with_params(self, mu, p):
        return MarkovChannel(self.n, self.flip_type, mu, p)

    def symbolic(self):
        return MarkovChannel(self.n, self.flip_type)

    def kraus(self):
        return enumerate_kraus(self.n, self.flip_type, self.mu, self.p)

    def weights(self):
        """Numeric weights as a float array indexed by pattern."""
        if not self.numeric:
            raise ValueError("channel is symbolic; use symbolic_weights(n)")
        return _numeric_weights(self.n, self.mu, self.p)

    def apply(self, rho):
        return apply_channel(self, rho)


def enumerate_kraus(n, flip_type="bit", mu=None, p=None):
    """All ``2^n`` Kraus terms in ascending pattern order."""
    n = check_qubits(n)
    if flip_type not in FLIP_TYPES:
        raise ValueError(f"flip_type must be one of {FLIP_TYPES}")
    sym = symbolic_weights(n)
    if mu is None and p is None:
        return [KrausTerm(n, k, w, flip_type) for k, w in enumerate(sym)]
    nums = _numeric_weights(n, check_probability("mu", mu), check_probability("p", p))
    return [KrausTerm(n, k, float(w), flip_type) for k, w in enumerate(nums)]


def _numeric_weights(n, mu, p):
    # exact rational evaluation, rounded once: weights stay >= 0 with no cancellation noise
    mu, p = Fraction(mu), Fraction(p)
    return np.array([float(w.eval(mu, p)) for w in symbolic_weights(n)], dtype=float)


def label_order(n):
    """Patterns ordered by flip count, then by flipped qubit positions.

    Index ``k`` in this list is the conventional label ``A'_k``: identity,
    single flips, double flips, ...
    """
    n = check_qubits(n)
    order = []
    for w in range(n + 1):
        for qubits in combinations(range(n), w):
            order.append(sum(1 << q for q in qubits))
    return order


def label_index(pattern, n):
    return label_order(n).index(pattern)


def unencoded_fidelity(n, mu=None, p=None):
    """Entanglement fidelity of the bare n-qubit channel, ``sum |tr A_k|^2 / 4^n``.

    Only the identity pattern has nonzero trace, so this is its weight.
    Returns a BiPoly when ``mu``/``p`` are omitted.
    """
    if mu is None and p is None:
        return symbolic_weights(check_qubits(n))[0]
    terms = enumerate_kraus(n, "bit", mu, p)
    dim = 1 << n
    total = 0.0
    for t in terms:
        tr = np.trace(t.pauli.matrix()).real if t.pattern == 0 else 0.0
        total += t.weight * tr * tr
    return total / dim**2


def apply_channel(channel, rho):
    """``sum_k A_k rho A_k^dagger`` for a numeric channel."""
    if not channel.numeric:
        raise TypeError("density-matrix application needs a numeric channel")
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (channel.dim, channel.dim):
        raise ValueError(f"density matrix shape {rho.shape} does not match {channel.n} qubits")
    out = np.zeros_like(rho)
    idx = np.arange(channel.dim)
    for k, w in enumerate(channel.weights()):
        if w == 0.0:
            continue
        ps = PauliString.from_pattern(channel.n, k, channel.flip_type)
        sign = phase_signs(ps.z_mask, channel.dim)
        perm = idx ^ ps.x_mask
        # (P rho P^dagger)[perm a, perm b] = s_a s_b rho[a, b]
        moved = np.empty_like(rho)
        moved[np.ix_(perm, perm)] = rho * np.outer(sign, sign)
        out += w * moved
    return out


def completeness_residual(channel):
    """``max |sum_k A_k^dagger A_k - I|`` for a numeric channel."""
    total = np.zeros((channel.dim, channel.dim), dtype=complex)
    for term in channel.kraus():
        a = term.operator()
        total += a.conj().T @ a
    return float(np.max(np.abs(total - np.eye(channel.dim))))

