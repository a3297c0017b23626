import numpy as np
import pytest

from nhqw.analysis import (
    memory_occupation,
    memory_occupations,
    position_marginal,
    total_variation,
    trajectory_table,
    velocity_marginal,
)
from nhqw.errors import RangeError, ValidationError
from nhqw.oracle import classical_rw_marginal, coined_qw_marginal
from nhqw.presets import PRESETS, get_preset
from nhqw.walks import R0, QwParams, evolve, initial_state, product_state


def test_initial_marginals():
    psi = initial_state(13)
    p = position_marginal(psi)
    assert p[6] == pytest.approx(1) and p.sum() == pytest.approx(1)
    np.testing.assert_allclose(velocity_marginal(psi), [0.5, 0.5])
    np.testing.assert_array_equal(memory_occupations(psi), np.zeros(13))


def test_marginal_phase_invariant():
    psi = evolve("uob-nhqw", get_preset("fig3").params, initial_state(7), 3)[-1]
    rotated = psi.with_amplitudes(psi.amplitudes * np.exp(0.83j))
    np.testing.assert_allclose(position_marginal(rotated), position_marginal(psi), atol=1e-15)


def test_fig7_memory_after_one_step():
    psi = evolve("uob-nhqw", get_preset("fig7").params, initial_state(13), 1)[-1]
    occ = memory_occupations(psi)
    expected = np.zeros(13)
    expected[[5, 7]] = 0.5
    np.testing.assert_allclose(occ, expected, atol=1e-15)
    assert ((occ >= 0) & (occ <= 1)).all()


def test_memory_occupation_range():
    with pytest.raises(RangeError):
        memory_occupation(initial_state(5), 5)


def test_memory_occupation_product_state():
    psi = product_state(5, 2, (1, 0), memory=0b10010)
    assert memory_occupation(psi, 1) == 1 and memory_occupation(psi, 4) == 1
    assert memory_occupation(psi, 0) == 0


def test_total_variation():
    p = np.array([0.2, 0.3, 0.5])
    assert total_variation(p, p) == 0
    assert total_variation([1, 0], [0, 1]) == 1


@pytest.mark.parametrize("p, q", [([0.5, 0.6], [0.5, 0.5]), ([1, 0], [1, 0, 0]), ([1.2, -0.2], [0.5, 0.5])])
def test_total_variation_rejects(p, q):
    with pytest.raises(ValidationError):
        total_variation(p, q)


def test_fig4_against_coined_walk_at_three():
    table = trajectory_table("uob-nhqw", get_preset("fig4").params, 13, 3)
    np.testing.assert_allclose(table.row(3)[[3, 5, 7, 9]], [0.25] * 4, atol=1e-14)
    tv = total_variation(table.row(3), coined_qw_marginal(R0, 3, 13, 6))
    assert tv == pytest.approx(0.25, abs=1e-14)


def test_fig5_is_binomial():
    table = trajectory_table("uob-nhqw", get_preset("fig5").params, 13, 6)
    for t in range(7):
        assert total_variation(table.row(t), classical_rw_marginal(t, 13, 6)) < 1e-9


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_tables_conserve_probability(name):
    table = trajectory_table("uob-nhqw", PRESETS[name].params, 13, 6)
    assert table.probs.shape == (7, 13)
    assert table.row(0)[6] == pytest.approx(1)
    assert np.abs(table.row_sums() - 1).max() < 1e-10
    if name in ("fig6", "fig7"):
        assert ((table.probs > 1e-12).sum(axis=1) <= 2).all()


def test_records_row_major():
    table = trajectory_table("qw", QwParams(), 5, 1)
    recs = list(table.records())
    assert recs[0][:2] == (0, 0) and recs[-1][:2] == (1, 4) and len(recs) == 10


def test_table_rejects_mismatched_initial_state():
    with pytest.raises(ValidationError):
        trajectory_table("qw", None, 5, 1, initial=initial_state(7))
