import numpy as np
import pytest

from tbe import (
    BinaryPolynomial,
    CapacityError,
    IsingPolynomial,
    evaluate_ising,
    hubo_from_json,
    hubo_to_json,
    hubo_to_text,
    mask_to_spins,
    mask_to_string,
    spins_to_mask,
)
from helpers import naive_eval, random_polynomial


def test_empty_polynomial_evaluates_to_zero():
    poly = IsingPolynomial(3, {})
    assert evaluate_ising(poly, [1, -1, 1]) == 0.0


def test_two_term_evaluation():
    poly = IsingPolynomial(3, {0: 1.0, 0b11: 2.0})
    assert evaluate_ising(poly, [-1, -1, -1]) == 3.0


def test_random_evaluation_matches_naive_products():
    rng = np.random.default_rng(17)
    for _ in range(20):
        n = int(rng.integers(1, 10))
        poly = random_polynomial(rng, n, int(rng.integers(1, 20)))
        mask = int(rng.integers(0, 1 << n))
        got = poly.evaluate_mask(mask)
        assert got == pytest.approx(naive_eval(poly, mask), rel=1e-12, abs=1e-12)
        assert evaluate_ising(poly, list(mask_to_spins(mask, n))) == pytest.approx(got)


def test_spin_mask_round_trip():
    spins = (1, -1, -1, 1, -1)
    mask = spins_to_mask(spins)
    assert mask == 0b10110
    assert mask_to_spins(mask, 5) == spins
    assert mask_to_string(mask, 5) == "+--+-"


def test_bad_spin_value_rejected():
    with pytest.raises(ValueError, match="not \\+1/-1"):
        spins_to_mask([1, 0])


def test_length_mismatch_rejected():
    with pytest.raises(ValueError, match="length"):
        IsingPolynomial(3, {1: 1.0}).evaluate([1, 1])


def test_degree_and_pruning():
    poly = IsingPolynomial(4, {0b1011: 2.0, 0b1: 1e-20, 0: 5.0})
    assert poly.degree == 3
    assert 0b1 not in poly.terms  # below relative tolerance of the 2.0 peak
    assert poly.constant == 5.0


def test_degree_of_constant_polynomial_is_zero():
    assert IsingPolynomial(4, {0: 3.0}).degree == 0
    assert IsingPolynomial(4, {}).degree == 0


def test_qubit_cap_enforced():
    with pytest.raises(CapacityError, match="64"):
        IsingPolynomial(65, {})
    IsingPolynomial(64, {(1 << 63): 1.0})  # boundary is fine


def test_term_key_out_of_range_rejected():
    with pytest.raises(ValueError, match="outside"):
        IsingPolynomial(2, {0b100: 1.0})


def test_non_finite_coupling_rejected():
    with pytest.raises(ValueError, match="non-finite"):
        IsingPolynomial(2, {1: float("nan")})


def test_addition_merges_terms():
    a = IsingPolynomial(2, {1: 1.0, 3: 2.0})
    b = IsingPolynomial(2, {1: -1.0, 2: 4.0})
    c = a + b
    assert c.terms == {3: 2.0, 2: 4.0}


def test_hubo_json_round_trip():
    rng = np.random.default_rng(23)
    poly = random_polynomial(rng, 8, 25)
    again = hubo_from_json(hubo_to_json(poly))
    assert again.num_qubits == poly.num_qubits
    assert again.terms == poly.terms


def test_hubo_json_term_order_is_degree_then_lexicographic():
    import json

    poly = IsingPolynomial(3, {0b111: 1.0, 0b1: 2.0, 0: 3.0, 0b110: 4.0})
    doc = json.loads(hubo_to_json(poly))
    assert [entry["qubits"] for entry in doc["terms"]] == [[], [0], [1, 2], [0, 1, 2]]


def test_hubo_text_form():
    poly = IsingPolynomial(2, {0: 1.5, 0b11: -2.0})
    lines = hubo_to_text(poly).splitlines()
    assert lines[0] == "1.5"
    assert lines[1] == "-2.0 0 1"


def test_binary_polynomial_evaluation():
    poly = BinaryPolynomial(3, {0: 1.0, 0b101: 2.0})
    assert poly.evaluate_bits(0b101) == 3.0
    assert poly.evaluate_bits(0b001) == 1.0
    assert poly.evaluate_bits(0b111) == 3.0


def test_variance_sums_squared_nonconstant_couplings():
    poly = IsingPolynomial(3, {0: 9.0, 1: 2.0, 0b110: -3.0})
    assert poly.variance() == pytest.approx(4.0 + 9.0)
