import math

import numpy as np
import pytest

from flatgate import quat
from flatgate.errors import NotSpecialUnitary
from flatgate.quat import (
    E1, E2, E3, ONE,
    ImagQuaternion, Quaternion, SU2Matrix, UnitQuaternion,
    conj, exp_pure, from_su2, mul, rotate_vector, to_su2,
)


def qarr(q):
    return q.as_array()


def test_basis_products():
    assert np.array_equal(qarr(mul(E1, E2)), qarr(E3))
    assert np.array_equal(qarr(mul(E2, E3)), qarr(E1))
    assert np.array_equal(qarr(mul(E3, E1)), qarr(E2))


def test_identity_element():
    rng = np.random.default_rng(0)
    q = quat.as_unit(quat.random_unit(rng))
    assert np.array_equal(qarr(mul(ONE, q)), qarr(q))
    assert np.array_equal(qarr(mul(q, ONE)), qarr(q))


def test_associativity_of_basis_triple():
    left = mul(mul(E1, E2), E3)
    right = mul(E1, mul(E2, E3))
    assert np.array_equal(qarr(left), qarr(right))
    assert np.array_equal(qarr(left), [-1.0, 0.0, 0.0, 0.0])


def test_conj_examples():
    assert np.array_equal(qarr(conj(E1)), [0.0, -1.0, 0.0, 0.0])
    assert np.array_equal(qarr(conj(ONE)), [1.0, 0.0, 0.0, 0.0])


def test_unit_times_conjugate_is_one():
    rng = np.random.default_rng(1)
    for _ in range(100):
        q = quat.as_unit(quat.random_unit(rng))
        assert np.max(np.abs(qarr(mul(q, conj(q))) - [1, 0, 0, 0])) <= 1e-12


def test_norm_is_multiplicative():
    rng = np.random.default_rng(2)
    for _ in range(100):
        a = Quaternion(*rng.normal(size=4))
        b = Quaternion(*rng.normal(size=4))
        assert mul(a, b).norm() == pytest.approx(a.norm() * b.norm(), abs=1e-12)


def test_anti_commutation():
    basis = [E1, E2, E3]
    for i, ei in enumerate(basis):
        sq = mul(ei, ei)
        assert np.max(np.abs(qarr(sq) - [-1, 0, 0, 0])) <= 1e-15
        for j, ej in enumerate(basis):
            if i == j:
                continue
            s = qarr(mul(ei, ej)) + qarr(mul(ej, ei))
            assert np.max(np.abs(s)) <= 1e-15


def test_exp_pure_examples():
    got = exp_pure(ImagQuaternion(0.0, math.pi / 2, 0.0))
    assert np.max(np.abs(qarr(got) - qarr(E2))) <= 1e-15
    assert np.array_equal(qarr(exp_pure(ImagQuaternion(0, 0, 0))), [1, 0, 0, 0])


def test_exp_commutation_identity():
    # exp(phi e_k) e_j = e_j exp(-phi e_k)
    rng = np.random.default_rng(3)
    for _ in range(50):
        phi = rng.uniform(-10, 10)
        lhs = mul(exp_pure(ImagQuaternion(phi, 0, 0)), E2)
        rhs = mul(E2, exp_pure(ImagQuaternion(-phi, 0, 0)))
        assert np.max(np.abs(qarr(lhs) - qarr(rhs))) <= 1e-12


def test_exp_pure_inverse():
    rng = np.random.default_rng(4)
    for _ in range(50):
        v = ImagQuaternion(*rng.normal(size=3))
        p = mul(exp_pure(v), exp_pure(-v))
        assert np.max(np.abs(qarr(p) - [1, 0, 0, 0])) <= 1e-12


def test_exp_pure_small_angle_branch():
    for mag in (1e-12, 9.999e-9, 1.0001e-8, 1e-7):
        v = ImagQuaternion(mag, 0.0, 0.0)
        got = exp_pure(v)
        assert got.x == pytest.approx(math.sin(mag), abs=1e-24)
        assert got.w == pytest.approx(math.cos(mag), abs=1e-16)


def test_su2_examples():
    assert np.max(np.abs(to_su2(ONE).m - np.eye(2))) == 0.0
    assert np.max(np.abs(to_su2(E3).m - np.diag([-1j, 1j]))) == 0.0


def test_su2_round_trip():
    rng = np.random.default_rng(5)
    for _ in range(100):
        q = quat.as_unit(quat.random_unit(rng))
        back = from_su2(to_su2(q))
        assert np.max(np.abs(qarr(back) - qarr(q))) <= 1e-12


def test_su2_homomorphism():
    rng = np.random.default_rng(6)
    for _ in range(50):
        a = quat.as_unit(quat.random_unit(rng))
        b = quat.as_unit(quat.random_unit(rng))
        lhs = to_su2(mul(a, b)).m
        rhs = to_su2(a).m @ to_su2(b).m
        assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_su2_rejects_bad_matrices():
    with pytest.raises(NotSpecialUnitary):
        SU2Matrix(np.array([[1.0, 0.1], [0.0, 1.0]]))
    with pytest.raises(NotSpecialUnitary):
        SU2Matrix(np.diag([1j, 1j]))  # unitary but det = -1


def test_rotate_vector_examples():
    v = rotate_vector(ONE, ImagQuaternion(1, 0, 0))
    assert np.array_equal(v.as_array(), [1, 0, 0])
    g = exp_pure(ImagQuaternion(math.pi / 4, 0, 0))
    v = rotate_vector(g, ImagQuaternion(1, 0, 0))
    assert np.max(np.abs(v.as_array() - [1, 0, 0])) <= 1e-15
    # documented sign: conjugation by exp((pi/4) e3) carries e1 to -e2
    g = exp_pure(ImagQuaternion(0, 0, math.pi / 4))
    v = rotate_vector(g, ImagQuaternion(1, 0, 0))
    assert np.max(np.abs(v.as_array() - [0, -1, 0])) <= 1e-15


def test_rotate_vector_preserves_norm():
    rng = np.random.default_rng(7)
    for _ in range(50):
        g = quat.as_unit(quat.random_unit(rng))
        v = ImagQuaternion(*rng.normal(size=3))
        assert rotate_vector(g, v).norm() == pytest.approx(v.norm(), rel=1e-13)


def test_unit_quaternion_renormalizes_small_errors():
    q = UnitQuaternion(1.0 + 5e-7, 0.0, 0.0, 0.0)
    assert abs(q.norm() - 1.0) <= 1e-12
    assert abs(q.w - 1.0) <= 1e-6


def test_unit_quaternion_rejects_large_errors():
    with pytest.raises(ValueError):
        UnitQuaternion(1.1, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        UnitQuaternion(0.0, 0.0, 0.0, 0.0)


def test_array_kernels_match_scalar_ops():
    rng = np.random.default_rng(8)
    a = rng.normal(size=(20, 4))
    b = rng.normal(size=(20, 4))
    prod = quat.qmul_arr(a, b)
    for i in range(20):
        expect = mul(Quaternion(*a[i]), Quaternion(*b[i]))
        assert np.max(np.abs(prod[i] - expect.as_array())) <= 1e-13
    assert np.array_equal(quat.qconj_arr(a)[:, 0], a[:, 0])
    assert np.array_equal(quat.qconj_arr(a)[:, 1:], -a[:, 1:])
