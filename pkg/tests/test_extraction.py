import numpy as np
import pytest

from andor.extraction import (Decomposition, SparsifyConfig,
                              all_and_decomposition, even_split_decomposition,
                              extract, filter_salient, salience_threshold,
                              salient_counts, sparsify, split_components)
from andor.models import (ValueTable, interaction_function_table, realize_table,
                          sample_sparse_game)


@pytest.fixture
def random_table():
    rng = np.random.default_rng(7)
    return ValueTable(n=6, values=rng.normal(size=64))


def test_split_components_sum(random_table):
    d = even_split_decomposition(random_table)
    u_and, u_or = split_components(random_table, d)
    np.testing.assert_allclose(u_and + u_or, random_table.values - d.delta)


def test_all_and_decomposition_puts_everything_on_and(random_table):
    iset = extract(random_table, all_and_decomposition(random_table))
    assert not iset.i_or.any()
    assert iset.bias == pytest.approx(random_table.values[0])


def test_decomposition_validation(random_table):
    d = all_and_decomposition(random_table)
    d.delta = d.delta + 1.0  # leaves the zero box
    with pytest.raises(ValueError):
        d.validate(random_table)


def test_extract_pure_and_interaction():
    v = interaction_function_table(0b0101, 2.0, "and", 4)
    iset = extract(v, all_and_decomposition(v))
    expected = np.zeros(16)
    expected[0b0101] = 2.0
    np.testing.assert_allclose(iset.i_and, expected, atol=1e-12)


def test_interaction_set_rejects_nonzero_empty_slot():
    from andor.extraction import InteractionSet
    bad = np.zeros(8)
    bad[0] = 1.0
    with pytest.raises(ValueError):
        InteractionSet(n=3, i_and=bad, i_or=np.zeros(8), bias=0.0)


def test_sparsify_history_non_increasing(random_table):
    for method in ("smoothed", "subgradient"):
        _, _, hist = sparsify(random_table, SparsifyConfig(max_iters=50,
                                                           method=method))
        assert all(b <= a + 1e-12 for a, b in zip(hist, hist[1:]))


def test_sparsify_zero_iters_returns_even_split(random_table):
    d, iset, hist = sparsify(random_table, SparsifyConfig(max_iters=0))
    ref = even_split_decomposition(random_table)
    np.testing.assert_allclose(d.gamma, ref.gamma)
    assert len(hist) == 1


def test_sparsify_beats_all_and(random_table):
    d, iset, hist = sparsify(random_table, SparsifyConfig(max_iters=200))
    all_and = extract(random_table, all_and_decomposition(random_table))
    assert iset.total_l1() <= all_and.total_l1() + 1e-9


def test_sparsify_delta_stays_in_box(random_table):
    d, _, _ = sparsify(random_table, SparsifyConfig(max_iters=100))
    d.validate(random_table)


def test_sparsify_recovers_a_small_game():
    game = sample_sparse_game(6, 5, {2: 1.0}, 4.0, rng_seed=21,
                              magnitude_floor=3.0, antichain=True)
    v = realize_table(game)
    d, iset, _ = sparsify(v, SparsifyConfig(denoise=False))
    tau = 0.02 * v.gap()
    assert iset.support(tau) == game.support()


def test_sparsify_rejects_unknown_method():
    with pytest.raises(ValueError):
        SparsifyConfig(method="annealing")


def test_sparsify_size_cap():
    v = ValueTable(n=21, values=np.zeros(1 << 21))
    with pytest.raises(ValueError):
        sparsify(v)


def test_salience_threshold_is_mean_gap_fraction():
    t1 = ValueTable(n=2, values=np.array([0.0, 1.0, 2.0, 10.0]))
    t2 = ValueTable(n=2, values=np.array([0.0, 1.0, 2.0, 20.0]))
    assert salience_threshold([t1, t2]) == pytest.approx(0.02 * 15.0)
    with pytest.raises(ValueError):
        salience_threshold([])


def test_filter_salient_strict_threshold():
    from andor.extraction import InteractionSet
    i_and = np.zeros(8)
    i_and[1] = 0.5
    i_and[2] = 0.5000001
    iset = InteractionSet(n=3, i_and=i_and, i_or=np.zeros(8), bias=0.0)
    kept = filter_salient(iset, 0.5)
    assert kept.i_and[1] == 0.0          # equal to tau: dropped
    assert kept.i_and[2] != 0.0


def test_salient_counts_by_order():
    from andor.extraction import InteractionSet
    i_and = np.zeros(8)
    i_and[0b011] = 2.0
    i_or = np.zeros(8)
    i_or[0b001] = -1.0
    iset = InteractionSet(n=3, i_and=i_and, i_or=i_or, bias=0.0)
    counts = salient_counts(iset, 0.5)
    assert counts == {"and": {2: 1}, "or": {1: 1}}
