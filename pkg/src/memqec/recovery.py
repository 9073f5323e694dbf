"""Detectability, correctable sets, syndrome subspaces and recovery maps."""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from memqec.channel import label_order, popcount
from memqec.codes import make_code

PROBE = (0.3, 0.2)
DETECT_TOL = 1e-10
ORTHO_TOL = 1e-10


def is_detectable(term, code, probe=PROBE, atol=DETECT_TOL):
    """Return ``lam`` with ``P_C A P_C = lam P_C``, or ``None``.

    Symbolic terms are evaluated at the generic ``probe`` point.
    """
    a = term.operator(*probe) if term.symbolic else term.operator()
    pc = code.projector
    sandwich = pc @ a @ pc
    lam = np.trace(sandwich) / 2.0
    if np.max(np.abs(sandwich - lam * pc)) < atol:
        return complex(lam)
    return None


def structurally_detectable(pattern, code):
    """Detectability read off the pattern alone (matching flip basis assumed)."""
    full = (1 << code.n) - 1
    if code.family == "rc":
        return pattern != full
    return popcount(pattern) % 2 == 0


def _in_label_order(terms):
    if not terms:
        return []
    order = {pat: i for i, pat in enumerate(label_order(terms[0].n))}
    return sorted(terms, key=lambda t: order[t.pattern])


def _check_match(channel, code):
    if channel.n != code.n:
        raise ValueError(f"channel has {channel.n} qubits, code has {code.n}")
    if channel.flip_type != code.flip_basis:
        raise ValueError(
            f"{channel.flip_type}-flip channel does not match a {code.flip_basis}-basis code"
        )


def detectable_set(channel, code):
    _check_match(channel, code)
    return _in_label_order([t for t in channel.kraus() if is_detectable(t, code) is not None])


def default_half_choice(n):
    """Weight-n/2 patterns with qubit 1 flipped: one per complementary pair."""
    return frozenset(
        pat for pat in range(1 << n) if 2 * popcount(pat) == n and pat & 1
    )


def correctable_set(channel, code, half_choice=None):
    """Correctable Kraus terms in label order (see ``label_order``).

    Repetition codes correct every pattern with fewer than n/2 flips; for
    even n one representative of each complementary weight-n/2 pair is added
    (``half_choice``, default: those flipping qubit 1). DFS codes keep every
    even-weight pattern, on which the code space is invariant.
    """
    _check_match(channel, code)
    n = code.n
    if code.family == "rc":
        if n % 2 == 0:
            half = default_half_choice(n) if half_choice is None else frozenset(half_choice)
            _check_half_choice(half, n)
        else:
            half = frozenset()

        def keep(pat):
            return 2 * popcount(pat) < n or pat in half
    else:

        def keep(pat):
            return popcount(pat) % 2 == 0

    return _in_label_order([t for t in channel.kraus() if keep(t.pattern)])


def _check_half_choice(half, n):
    full = (1 << n) - 1
    weight_half = [pat for pat in range(1 << n) if 2 * popcount(pat) == n]
    for pat in half:
        if 2 * popcount(pat) != n:
            raise ValueError(f"pattern {pat:#b} does not have weight n/2")
    for pat in weight_half:
        if (pat in half) == ((pat ^ full) in half):
            raise ValueError("half_choice must hold exactly one of each complementary pair")


@dataclass
class SyndromeSubspaces:
    """Orthonormal syndrome vectors ``v[l][i] = |v_l^{i_L}>``.

    ``sources[l]`` lists the error patterns that land on syndrome ``l``.
    """

    v0: list
    v1: list
    sources: list

    def __len__(self):
        return len(self.v0)

    @property
    def vectors(self):
        return self.v0 + self.v1


def syndrome_subspaces(correctable, code, atol=ORTHO_TOL):
    """Span the images ``A_k |i_L>`` of the codewords under the correctable set.

    Raises ``ValueError`` if two images overlap without coinciding, or if an
    error maps both codewords to the same syndrome with different phases:
    either means the set is not correctable.
    """
    v0, v1, sources = [], [], []
    for term in correctable:
        pauli = term.pauli
        u0 = pauli.apply_vector(code.zero_logical)
        u1 = pauli.apply_vector(code.one_logical)
        match = None
        for l in range(len(v0)):
            o0 = np.vdot(v0[l], u0)
            o1 = np.vdot(v1[l], u1)
            if abs(abs(o0) - 1) < atol and abs(abs(o1) - 1) < atol:
                if abs(o0 - o1) > atol:
                    raise ValueError(
                        f"pattern {term.label} acts on the code with a relative phase"
                    )
                match = l
                break
        if match is not None:
            sources[match].append(term.pattern)
            continue
        existing = v0 + v1
        if existing:
            basis = np.stack(existing)
            if np.max(np.abs(basis.conj() @ np.stack([u0, u1]).T)) > atol:
                raise ValueError(
                    f"image of pattern {term.label} overlaps an earlier syndrome subspace"
                )
        if abs(np.vdot(u0, u1)) > atol:
            raise ValueError(f"pattern {term.label} maps the codewords onto overlapping states")
        v0.append(u0)
        v1.append(u1)
        sources.append([term.pattern])
    return SyndromeSubspaces(v0, v1, sources)


def orthogonal_complement(vectors, dim, atol=1e-8):
    """Orthonormal basis of the complement of ``span(vectors)`` (Gram-Schmidt
    over computational basis vectors)."""
    basis = [np.asarray(v, dtype=complex) for v in vectors]
    target = dim - len(basis)
    found = []
    for b in range(dim):
        if len(found) == target:
            break
        w = np.zeros(dim, dtype=complex)
        w[b] = 1.0
        for _ in range(2):  # re-orthogonalise once for stability
            stack = basis + found
            if stack:
                m = np.stack(stack)
                w = w - m.T @ (m.conj() @ w)
        norm = np.linalg.norm(w)
        if norm > atol:
            found.append(w / norm)
    return found


@dataclass
class RecoverySet:
    """Recovery operators ``R_l`` (and ``R_perp`` when the syndromes do not
    fill the Hilbert space)."""

    code: object = field(repr=False)
    ops: np.ndarray = field(repr=False)
    subspaces: SyndromeSubspaces = field(repr=False)
    correctable: list = field(repr=False)
    includes_orthogonal_projector: bool = False
    complement: list = field(default_factory=list, repr=False)
    cache: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.ops)

    @property
    def n_syndromes(self):
        return len(self.subspaces)

    def completeness(self):
        stacked = self.ops.reshape(-1, self.ops.shape[-1])
        return stacked.conj().T @ stacked

    def completeness_residual(self):
        dim = self.ops.shape[-1]
        return float(np.max(np.abs(self.completeness() - np.eye(dim))))

    def code_rows(self):
        """``rows[l, i] = <i_L| R_l`` as an ``(L, 2, N)`` array."""
        return np.einsum("in,lnm->lim", self.code.codewords.conj(), self.ops)

    def apply(self, rho):
        """``sum_l R_l rho R_l^dagger``.

        Uses the rank-2 factorisation ``R_l = sum_i |i_L><v_l^i|`` for the
        syndrome operators, so large n stays cheap.
        """
        rho = np.asarray(rho, dtype=complex)
        sub = self.subspaces
        L = len(sub)
        bras = np.stack([np.stack([sub.v0[l], sub.v1[l]]) for l in range(L)]).reshape(2 * L, -1)
        w = bras.conj() @ rho @ bras.T
        block = np.einsum("lilj->lij", w.reshape(L, 2, L, 2))
        small = block.sum(axis=0)
        cw = self.code.codewords
        out = cw.T @ small @ cw.conj()
        if self.includes_orthogonal_projector:
            perp = self.ops[-1]
            out = out + perp @ rho @ perp.conj().T
        return out


def build_recovery(subspaces, code, correctable=()):
    """``R_l = sum_i |i_L><v_l^{i_L}|`` plus the complement projector if needed."""
    dim = code.dim
    ops = []
    cw = code.codewords
    for a, b in zip(subspaces.v0, subspaces.v1):
        ops.append(np.outer(cw[0], a.conj()) + np.outer(cw[1], b.conj()))
    complement = []
    if 2 * len(subspaces) < dim:
        complement = orthogonal_complement(subspaces.vectors, dim)
        r_perp = np.zeros((dim, dim), dtype=complex)
        for r in complement:
            r_perp += np.outer(r, r.conj())
        ops.append(r_perp)
    return RecoverySet(
        code=code,
        ops=np.stack(ops),
        subspaces=subspaces,
        correctable=list(correctable),
        includes_orthogonal_projector=bool(complement),
        complement=complement,
    )


def recovery_for(code, half_choice=None):
    """Correctable set, syndrome subspaces and recovery for ``code``."""
    channel = code.channel()
    correctable = correctable_set(channel, code, half_choice)
    subspaces = syndrome_subspaces(correctable, code)
    return build_recovery(subspaces, code, correctable)


@lru_cache(maxsize=64)
def cached_recovery(family, n, flip_basis="bit"):
    return recovery_for(make_code(family, n, flip_basis))


def composed_channel(channel, recovery):
    """Yield ``(l, k, R_l A_k)`` for every recovery/Kraus pair, ``l`` major."""
    if channel.n != recovery.code.n:
        raise ValueError("channel and recovery act on different qubit counts")
    terms = channel.kraus()
    ops = [t.operator() if not t.symbolic else None for t in terms]
    if any(op is None for op in ops):
        raise TypeError("composed operators need a numeric channel")
    for l, r in enumerate(recovery.ops):
        for k, a in enumerate(ops):
            yield l, k, r @ a


def recovered_state(channel, recovery, rho):
    """``(R o Lambda)(rho)`` applied as two stages."""
    return recovery.apply(channel.apply(rho))

