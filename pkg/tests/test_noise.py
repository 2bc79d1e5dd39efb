from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from interleaving.noise import (
    NoiseParams, delay_loss, directional_erasure, encoded_fusion_erasure, noise_table,
    per_bin_loss, physical_fusion_erasure, qubit_loss,
)

P_CLOCK = per_bin_loss(0.2, 0.2)


def p_enc_exact(p0: Fraction) -> Fraction:
    return ((1 - (1 - p0) ** 2) ** 2 + 1 - (1 - p0 ** 2) ** 2) / 2


def test_per_bin_loss():
    assert P_CLOCK == pytest.approx(1 - 10 ** (-4e-5 / 10), rel=1e-12)
    assert P_CLOCK == pytest.approx(9.21e-6, rel=1e-3)
    assert per_bin_loss(0.0, 0.2) == 0.0
    with pytest.raises(ValueError):
        per_bin_loss(-0.1, 0.2)


@pytest.mark.parametrize("n, percent", [(1, 0.0009), (1024, 0.94), (5041, 4.5), (10000, 8.8)])
def test_delay_loss_table(n, percent):
    assert 100 * delay_loss(P_CLOCK, n) == pytest.approx(percent, abs=0.05)


def test_qubit_loss():
    assert qubit_loss(NoiseParams(0.02), 0) == pytest.approx(0.02)
    assert qubit_loss(NoiseParams(0.0, P_CLOCK), 10000) == pytest.approx(0.088, abs=5e-4)


def test_physical_fusion_erasure_examples():
    assert physical_fusion_erasure(NoiseParams(0.0, 0.0), 0) == 0.125
    assert physical_fusion_erasure(NoiseParams(0.0, 0.0), 777) == 0.125
    assert physical_fusion_erasure(NoiseParams(0.01, 0.0), 0) == pytest.approx(0.159478, abs=1e-6)
    p0 = physical_fusion_erasure(NoiseParams(0.0, P_CLOCK), 5041)
    # the quoted survival factor 0.954657 is rounded; (1 - p_clock)**5041 is 0.954632
    assert p0 == pytest.approx(1 - 0.875 * 0.954657, abs=5e-5)
    assert p0 == pytest.approx(1 - 0.875 * (1 - P_CLOCK) ** 5041, rel=1e-13)


def test_encoded_fusion_erasure_examples():
    assert encoded_fusion_erasure(0.0) == 0.0
    assert encoded_fusion_erasure(0.5) == 0.5
    assert p_enc_exact(Fraction(1, 8)) == Fraction(11, 256)
    assert encoded_fusion_erasure(0.125) == pytest.approx(11 / 256, abs=1e-15)
    with pytest.raises(ValueError):
        encoded_fusion_erasure(1.5)


@settings(max_examples=200)
@given(st.fractions(min_value=0, max_value=1, max_denominator=10 ** 6))
def test_encoded_matches_exact_rational(p0):
    assert encoded_fusion_erasure(float(p0)) == pytest.approx(float(p_enc_exact(p0)), abs=1e-14)


@given(st.floats(1e-9, 0.5 - 1e-9))
def test_encoding_helps_below_half(p0):
    assert encoded_fusion_erasure(p0) < p0


@given(st.floats(0, 0.5), st.floats(0, 1e-4), st.integers(0, 20000),
       st.floats(1e-4, 0.05), st.integers(1, 1000))
def test_monotone(pb, pc, n, dp, dn):
    base = physical_fusion_erasure(NoiseParams(pb, pc), n)
    assert physical_fusion_erasure(NoiseParams(pb + dp * (1 - pb), pc), n) > base
    if n > 0:
        assert physical_fusion_erasure(NoiseParams(pb, pc + dp * 1e-3), n) > base
    if pc > 1e-9 and pb < 0.5:
        assert physical_fusion_erasure(NoiseParams(pb, pc), n + dn) > base
    assert encoded_fusion_erasure(min(base + 1e-3, 1.0)) > encoded_fusion_erasure(base)


def test_directional_erasure():
    flat = directional_erasure(NoiseParams(0.02, 0.0), 1)
    assert flat.p_x == flat.p_y == flat.p_z
    ordered = directional_erasure(NoiseParams(0.023, P_CLOCK), 71)
    assert ordered.p_x < ordered.p_y < ordered.p_z
    far = directional_erasure(NoiseParams(0.0, P_CLOCK), 100)
    lost = 1 - (1 - delay_loss(P_CLOCK, 10000)) * 0.875
    assert far.p_z == pytest.approx(encoded_fusion_erasure(lost), rel=1e-12)
    with pytest.raises(ValueError):
        directional_erasure(NoiseParams(0.0), 0)


def test_params_validation():
    for bad in (-0.1, 1.0):
        with pytest.raises(ValueError):
            NoiseParams(bad)
        with pytest.raises(ValueError):
            NoiseParams(0.0, bad)


def test_noise_table_columns():
    rows = noise_table(NoiseParams.fiber(0.0), [1, 1024])
    assert [r["N"] for r in rows] == [1, 1024]
    assert np.isclose(rows[1]["delay_loss"], delay_loss(P_CLOCK, 1024))
    assert rows[0]["p_enc"] < rows[0]["p0"]
