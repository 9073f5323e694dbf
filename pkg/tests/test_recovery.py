import itertools

import numpy as np
import pytest

from memqec.channel import MarkovChannel, label_order, symbolic_weights
from memqec.codes import make_code, repetition_code
from memqec.fidelity import entanglement_fidelity, fidelity_by_matrices, numeric_fidelity
from memqec.pauli import restricted_matrix
from memqec.recovery import (
    build_recovery,
    cached_recovery,
    composed_channel,
    correctable_set,
    default_half_choice,
    detectable_set,
    is_detectable,
    recovered_state,
    recovery_for,
    structurally_detectable,
    syndrome_subspaces,
)

CASES = [(f, n) for f in ("rc", "dfs") for n in range(2, 9)]


def indices(terms, n):
    order = label_order(n)
    return [order.index(t.pattern) for t in terms]


@pytest.mark.parametrize(
    "family,n,detect,correct",
    [
        ("rc", 3, list(range(7)), [0, 1, 2, 3]),
        ("rc", 4, list(range(15)), [0, 1, 2, 3, 4, 5, 6, 7]),
        ("dfs", 3, [0, 4, 5, 6], [0, 4, 5, 6]),
        ("dfs", 4, [0, 5, 6, 7, 8, 9, 10, 15], [0, 5, 6, 7, 8, 9, 10, 15]),
    ],
)
def test_small_sets_in_label_order(family, n, detect, correct):
    code = make_code(family, n)
    ch = code.channel()
    assert indices(detectable_set(ch, code), n) == detect
    assert indices(correctable_set(ch, code), n) == correct


@pytest.mark.parametrize("family,n", CASES)
def test_structural_detectability_agrees(family, n):
    code = make_code(family, n)
    for term in code.channel().kraus():
        assert (is_detectable(term, code) is not None) == structurally_detectable(term.pattern, code)


def test_correctable_sizes():
    for n in range(2, 9):
        code = make_code("rc", n)
        assert len(correctable_set(code.channel(), code)) == 1 << (n - 1)
        code = make_code("dfs", n)
        assert len(correctable_set(code.channel(), code)) == 1 << (n - 1)


def test_mismatched_channel_rejected():
    code = repetition_code(3)
    with pytest.raises(ValueError):
        correctable_set(MarkovChannel(3, "phase"), code)
    with pytest.raises(ValueError):
        detectable_set(MarkovChannel(4), code)


def test_rc3_syndromes_and_operators():
    code = repetition_code(3)
    sub = syndrome_subspaces(correctable_set(code.channel(), code), code)
    assert len(sub) == 4
    # qubit-2 flip syndrome: |010>, |101>
    np.testing.assert_allclose(sub.v0[2], np.eye(8)[0b010])
    np.testing.assert_allclose(sub.v1[2], np.eye(8)[0b101])
    rec = build_recovery(sub, code)
    assert not rec.includes_orthogonal_projector
    expected = np.zeros((8, 8))
    expected[0, 0b010] = expected[7, 0b101] = 1
    np.testing.assert_allclose(rec.ops[2], expected)


def test_rc3_restricted_trace_vanishes():
    code = repetition_code(3)
    rec = cached_recovery("rc", 3)
    a5 = MarkovChannel(3, mu=0.4, p=0.3).kraus()[label_order(3)[5]].operator()
    assert abs(np.trace(restricted_matrix(rec.ops[2] @ a5, code))) < 1e-15


@pytest.mark.parametrize("family,n", CASES)
def test_recovery_completeness(family, n):
    assert cached_recovery(family, n).completeness_residual() < 1e-12


def test_dfs_has_orthogonal_projector():
    rec = cached_recovery("dfs", 4)
    assert rec.n_syndromes == 1
    assert rec.includes_orthogonal_projector
    assert len(rec.complement) == 14


@pytest.mark.parametrize("family,n", [("rc", 3), ("rc", 4), ("dfs", 3), ("dfs", 4)])
def test_each_correctable_error_has_one_undoing_operator(family, n):
    code = make_code(family, n)
    rec = cached_recovery(family, n)
    correct = {t.pattern for t in rec.correctable}
    for k, term in enumerate(code.channel().kraus()):
        traces = [np.trace(restricted_matrix(r @ term.pauli.matrix(), code)) for r in rec.ops]
        hits = [l for l, t in enumerate(traces) if abs(t) > 1e-12]
        if k in correct:
            assert len(hits) == 1
            assert abs(abs(traces[hits[0]]) - 2) < 1e-12
        else:
            assert hits == []


@pytest.mark.parametrize("n", [3, 4, 5])
def test_dfs_scalar_action(n):
    # even-weight X strings act as +1 on |+...+> and |-...->
    code = make_code("dfs", n)
    for pat in range(1 << n):
        term = code.channel().kraus()[pat]
        block = restricted_matrix(term.pauli.matrix(), code)
        w = bin(pat).count("1")
        np.testing.assert_allclose(block, np.diag([1, (-1) ** w]), atol=1e-12)


def test_composed_count():
    ch = MarkovChannel(3, mu=0.2, p=0.1)
    ops = list(composed_channel(ch, cached_recovery("rc", 3)))
    assert len(ops) == 32
    assert [(l, k) for l, k, _ in ops[:3]] == [(0, 0), (0, 1), (0, 2)]
    with pytest.raises(TypeError):
        list(composed_channel(MarkovChannel(3), cached_recovery("rc", 3)))


def test_half_choice_validation():
    code = repetition_code(4)
    with pytest.raises(ValueError):
        recovery_for(code, {0b0011, 0b1100, 0b0101})
    with pytest.raises(ValueError):
        recovery_for(code, {0b0111})
    assert default_half_choice(4) == {0b0011, 0b0101, 0b1001}


def test_half_choice_swaps():
    """Swapping a representative for its complement changes the fidelity by
    exactly the weight difference; it vanishes for mirror-symmetric pairs."""
    code = repetition_code(4)
    base = entanglement_fidelity(code, recovery_for(code)).poly
    w = symbolic_weights(4)
    default = default_half_choice(4)
    for pat in sorted(default):
        comp = pat ^ 0b1111
        rec = recovery_for(code, (default - {pat}) | {comp})
        assert rec.completeness_residual() < 1e-12
        alt = entanglement_fidelity(code, rec).poly
        assert alt - base == w[comp] - w[pat]
        mus, ps = np.linspace(0, 1, 7), np.linspace(0, 0.5, 7)
        np.testing.assert_allclose(numeric_fidelity(code, rec, mus, ps), alt.eval_grid(mus, ps), atol=1e-12)
    # 0011/1100 and 0101/1010 are mirror images; 1001/0110 are not
    assert w[0b0011] == w[0b1100] and w[0b0101] == w[0b1010]
    assert w[0b1001] != w[0b0110]


@pytest.mark.parametrize("family,n", [("rc", 3), ("dfs", 3), ("rc", 4), ("dfs", 4)])
def test_recovered_state_matches_dense(family, n, rng):
    code = make_code(family, n)
    rec = cached_recovery(family, n)
    ch = MarkovChannel(n, mu=0.45, p=0.3)
    a = rng.normal(size=(1 << n,) * 2) + 1j * rng.normal(size=(1 << n,) * 2)
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    dense = sum(op @ rho @ op.conj().T for _, _, op in composed_channel(ch, rec))
    np.testing.assert_allclose(recovered_state(ch, rec, rho), dense, atol=1e-12)
    assert abs(fidelity_by_matrices(code, rec, ch) - numeric_fidelity(code, rec, 0.45, 0.3)) < 1e-12


def test_overlapping_images_rejected():
    code = repetition_code(3)
    terms = code.channel().kraus()
    with pytest.raises(ValueError):
        syndrome_subspaces([terms[0], terms[1], terms[6]], code)


def test_every_pair_detectable_product():
    # Knill-Laflamme: A_k^dagger A_k' detectable for all correctable pairs
    code = repetition_code(3)
    pc = code.projector
    terms = correctable_set(code.channel(), code)
    for a, b in itertools.product(terms, repeat=2):
        m = pc @ a.pauli.matrix().conj().T @ b.pauli.matrix() @ pc
        lam = np.trace(m) / 2
        np.testing.assert_allclose(m, lam * pc, atol=1e-12)
