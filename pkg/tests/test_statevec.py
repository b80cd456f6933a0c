"""Full-statevector brute force vs the 3D subspace reduction."""

import math
import random

import numpy as np
import pytest

from partial_search import (
    FullState,
    Kind,
    OperatorSequence,
    ResourceLimitError,
    angles,
    apply_global_diffusion,
    apply_local_diffusion,
    apply_oracle,
    apply_sequence,
    block_success_probability,
    grk_optimal_parameters,
    grover_full_search_probability,
    local_grover_matrix,
    new_search_space,
    simulate_sequence,
    verify_subspace,
)

G, L = Kind.GLOBAL, Kind.LOCAL


def test_oracle_flips_target_only():
    st = FullState.uniform(2, target_index=3)
    out = apply_oracle(st)
    assert out.amplitudes[3] == pytest.approx(-0.5, abs=1e-15)
    assert np.all(out.amplitudes[:3] == st.amplitudes[:3])


def test_oracle_is_involution():
    st = FullState.uniform(5, target_index=17)
    twice = apply_oracle(apply_oracle(st))
    assert np.max(np.abs(twice.amplitudes - st.amplitudes)) == 0.0


def test_oracle_target_overlap():
    n = 6
    st = apply_oracle(FullState.uniform(n, target_index=9))
    assert st.amplitudes[9] == pytest.approx(-1 / math.sqrt(2**n), abs=1e-15)


def test_global_diffusion_fixes_uniform():
    st = FullState.uniform(4, target_index=0)
    out = apply_global_diffusion(st)
    assert np.max(np.abs(out.amplitudes - st.amplitudes)) < 1e-15


def test_global_diffusion_is_involution():
    rng = np.random.default_rng(0)
    v = rng.normal(size=64)
    v /= np.linalg.norm(v)
    st = FullState(amplitudes=v, n=6, target_index=5)
    twice = apply_global_diffusion(apply_global_diffusion(st))
    assert np.max(np.abs(twice.amplitudes - v)) < 1e-13


def test_grover_iterations_hit_closed_form():
    n, t = 6, 41
    st = FullState.uniform(n, target_index=t)
    for k in range(1, 7):
        st = apply_global_diffusion(apply_oracle(st))
        assert st.amplitudes[t] ** 2 == pytest.approx(
            grover_full_search_probability(n, k), abs=1e-13
        )


def test_local_diffusion_fixes_uniform():
    st = FullState.uniform(6, target_index=3)
    out = apply_local_diffusion(st, m=2)
    assert np.max(np.abs(out.amplitudes - st.amplitudes)) < 1e-15


def test_local_diffusion_confined_to_blocks():
    n, m = 6, 3
    b = 2**m
    v = np.zeros(2**n)
    v[:b] = np.random.default_rng(1).normal(size=b)
    v /= np.linalg.norm(v)
    out = apply_local_diffusion(FullState(amplitudes=v, n=n, target_index=0), m=m)
    assert np.all(out.amplitudes[b:] == 0.0)
    assert np.linalg.norm(out.amplitudes) == pytest.approx(1.0, abs=1e-13)


def test_local_query_matrix_element():
    # <bt~|G_m|t> in the full space equals the 3D matrix entry -sin(2 theta2)
    n, m = 6, 3
    sp = new_search_space(n, m)
    b = sp.b
    t = 11  # block 1
    v = np.zeros(2**n)
    v[t] = 1.0
    out = apply_local_diffusion(
        apply_oracle(FullState(amplitudes=v, n=n, target_index=t)), m=m
    )
    block = out.amplitudes[b : 2 * b].copy()
    block[t - b] = 0.0  # remove the target component
    overlap = block.sum() / math.sqrt(b - 1)
    assert overlap == pytest.approx(local_grover_matrix(sp)[1, 0], abs=1e-13)
    assert overlap == pytest.approx(-math.sin(2 * angles(sp).theta2), abs=1e-13)


# -- simulate_sequence ---------------------------------------------------------


def test_simulate_table_corner():
    seq = OperatorSequence([(L, 1), (G, 1)])
    block, target, st3 = simulate_sequence(8, 2, target_index=77, seq=seq)
    assert block == pytest.approx(0.105747, abs=5e-7)
    assert target == pytest.approx(st3.amp_t**2, abs=1e-14)


def test_simulate_empty_sequence():
    block, target, _ = simulate_sequence(6, 2, 5, OperatorSequence(()))
    assert block == pytest.approx(1 / 2**4, abs=1e-14)
    assert target == pytest.approx(1 / 2**6, abs=1e-16)


def test_simulate_rejects_oversized_space():
    with pytest.raises(ResourceLimitError):
        simulate_sequence(15, 3, 0, OperatorSequence([(G, 1)]))


def test_projection_is_complete_and_matches_dynamics():
    rng = random.Random(5)
    n, m = 10, 4
    sp = new_search_space(n, m)
    for _ in range(30):
        kinds = [rng.choice((G, L)) for _ in range(rng.randint(0, 25))]
        seq = OperatorSequence.from_kinds(kinds)
        t = rng.randrange(2**n)
        block, target, st3 = simulate_sequence(n, m, t, seq)
        assert st3.norm_sq() == pytest.approx(1.0, abs=1e-12)
        ref = apply_sequence(sp, seq)
        assert np.max(np.abs(st3.as_array() - ref.as_array())) < 1e-12


def test_target_index_invariance():
    n, m = 8, 3
    seq = OperatorSequence([(G, 2), (L, 3), (G, 1)])
    probs = {simulate_sequence(n, m, t, seq)[:2] for t in (0, 37, 255)}
    blocks = [p[0] for p in probs]
    targets = [p[1] for p in probs]
    assert max(blocks) - min(blocks) < 1e-13
    assert max(targets) - min(targets) < 1e-13


def test_grk_parameter_sequence_agrees_both_ways():
    sp = new_search_space(8, 4)
    p = grk_optimal_parameters(sp)
    seq = OperatorSequence([(G, p.k1), (L, p.k2), (G, 1)])
    block, _, _ = simulate_sequence(8, 4, 200, seq)
    assert block == pytest.approx(block_success_probability(sp, seq), abs=1e-12)


def test_degenerate_blocks_reduce_to_full_search():
    # m = 0: every item is its own block, so a global-only sequence is
    # plain Grover and the projection carries no block component.
    for k in (1, 4):
        block, target, st3 = simulate_sequence(6, 0, 13, OperatorSequence([(G, k)]))
        assert block == pytest.approx(target, abs=1e-14)
        assert target == pytest.approx(grover_full_search_probability(6, k), abs=1e-13)
        assert st3.amp_bt == 0.0


# -- verify_subspace -----------------------------------------------------------


def test_verify_subspace_passes():
    report = verify_subspace(8, 3, num_random_sequences=40, max_k=25, tol=1e-10)
    assert report["passed"] is True
    assert report["failures"] == []
    assert report["max_deviation"] < 1e-10
    assert report["worst_case"]["deviation"] == report["max_deviation"]


def test_verify_subspace_is_seeded():
    a = verify_subspace(7, 2, num_random_sequences=10, max_k=15, seed=9)
    b = verify_subspace(7, 2, num_random_sequences=10, max_k=15, seed=9)
    assert a == b


def test_verify_subspace_reports_failures_at_absurd_tol():
    report = verify_subspace(6, 2, num_random_sequences=10, max_k=20, tol=1e-18)
    assert report["passed"] is False
    assert len(report["failures"]) > 0
    failure = report["failures"][0]
    assert set(failure) >= {"deviation", "sequence", "target_index"}
