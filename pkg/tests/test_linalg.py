"""Exact linear algebra: ranks, kernels, cohomology of small complexes."""

from fractions import Fraction

import pytest

from dga.linalg import (
    CochainComplex,
    GradedLinearMap,
    GradedVectorSpace,
    LinalgError,
    PrimeField,
    Rationals,
    field_from_spec,
    mat_mul,
    nullspace,
    rank_kernel_image,
    rank_of,
    rref,
    solve,
)

Q = Rationals()


def test_field_from_spec():
    assert field_from_spec("Q").name == "Q"
    assert field_from_spec("F7").p == 7
    with pytest.raises(LinalgError):
        field_from_spec("F6")
    with pytest.raises(LinalgError):
        field_from_spec("R")


def test_prime_field_arithmetic():
    F = PrimeField(5)
    assert F.add(3, 4) == 2
    assert F.mul(3, 4) == 2
    assert F.inv(2) == 3
    assert F.parse("7") == 2
    assert F.parse("1/2") == 3
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_rationals_parse_and_str():
    assert Q.parse("-3/4") == Fraction(-3, 4)
    assert Q.to_str(Fraction(7, 2)) == "7/2"


def test_large_prime_field():
    p = 2147483629  # largest prime below 2^31
    F = PrimeField(p)
    a = F.of_int(-5)
    assert F.mul(a, F.inv(a)) == 1
    assert F.add(p - 1, 1) == 0
    with pytest.raises(LinalgError):
        PrimeField(2**31 + 11)


def test_rref_and_rank():
    m = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    red, pivots = rref(Q, m)
    assert pivots == [0]
    assert rank_of(Q, m) == 1


def test_nullspace_annihilated():
    m = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(0), Fraction(1), Fraction(1)]]
    ker = nullspace(Q, m, 3)
    assert len(ker) == 1
    for v in ker:
        for row in m:
            s = sum(a * b for a, b in zip(row, v))
            assert s == 0


def test_solve():
    a = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(3)]]
    x = solve(Q, a, [Fraction(4), Fraction(6)])
    assert x == [Fraction(2), Fraction(2)]
    assert solve(Q, [[Fraction(0)]], [Fraction(1)]) is None


def _gvs(dims):
    return GradedVectorSpace({n: [f"b{n}_{i}" for i in range(k)] for n, k in dims.items()})


def test_rank_kernel_image_zero_map():
    # zero map on a 3-dim degree-0 space -> rank 0, kernel dim 3
    src = _gvs({0: 3})
    tgt = _gvs({0: 3})
    m = GradedLinearMap(src, tgt, 0, {})
    info = rank_kernel_image(Q, m)
    rank, ker, _ = info[0]
    assert rank == 0
    assert len(ker) == 3


def test_rank_kernel_image_identity():
    # identity on a 2-dim space -> rank 2, kernel dim 0
    src = _gvs({0: 2})
    one, zero = Fraction(1), Fraction(0)
    m = GradedLinearMap(src, src, 0, {0: [[one, zero], [zero, one]]})
    rank, ker, _ = rank_kernel_image(Q, m)[0]
    assert rank == 2
    assert ker == []


def test_rank_proportional_rows():
    # over Q, [[1,2],[2,4]] -> rank 1
    src = _gvs({0: 2})
    m = GradedLinearMap(src, src, 0, {0: [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]})
    rank, ker, image = rank_kernel_image(Q, m)[0]
    assert rank == 1
    assert len(ker) == 1
    # kernel columns are annihilated exactly
    for v in ker:
        assert m.apply(Q, 0, v) == [Fraction(0), Fraction(0)]
    # image is spanned by the map applied to basis vectors
    assert image == [[Fraction(1), Fraction(2)]]


def test_block_shape_mismatch():
    src = _gvs({0: 2})
    with pytest.raises(LinalgError):
        GradedLinearMap(src, src, 0, {0: [[Fraction(1)]]})


def _complex(dims, blocks):
    space = _gvs(dims)
    d = GradedLinearMap(space, space, 1, blocks)
    return CochainComplex(Q, space, d)


def test_cohomology_exact_complex():
    # 0 -> k -(id)-> k -> 0 is exact: H^* = 0
    c = _complex({0: 1, 1: 1}, {0: [[Fraction(1)]]})
    c.check_differential()
    assert c.cohomology_table() == {}


def test_cohomology_zero_differential():
    # zero differential, dims (1,2,1) in degrees -1..1 -> H dims 1,2,1
    c = _complex({-1: 1, 0: 2, 1: 1}, {})
    c.check_differential()
    assert c.cohomology_table() == {-1: 1, 0: 2, 1: 1}


def test_cohomology_zero_map_two_terms():
    # 0 -> k -(0)-> k -> 0: H has dim 1 in both degrees
    c = _complex({0: 1, 1: 1}, {0: [[Fraction(0)]]})
    assert c.cohomology_table() == {0: 1, 1: 1}


def test_check_differential_rejects_nonsquare_zero():
    c = _complex({0: 1, 1: 1, 2: 1}, {0: [[Fraction(1)]], 1: [[Fraction(1)]]})
    with pytest.raises(LinalgError):
        c.check_differential()


def test_cohomology_representatives_are_cycles():
    # d(a) = b in degrees 0 -> 1 where degree 0 is 2-dimensional
    c = _complex({0: 2, 1: 1}, {0: [[Fraction(1), Fraction(0)]]})
    dim, reps = c.cohomology(0)
    assert dim == 1
    for v in reps:
        img = c.d.apply(Q, 0, v)
        assert all(x == 0 for x in img)


def test_euler_characteristic_additivity():
    # chi(H(C)) equals chi(C) degreewise-alternating, for any finite complex
    c = _complex({-1: 2, 0: 3, 1: 1}, {-1: [[Fraction(1), Fraction(0)],
                                            [Fraction(0), Fraction(1)],
                                            [Fraction(0), Fraction(0)]]})
    c.check_differential()
    chi_space = sum((-1) ** n * c.space.dim(n) for n in c.space.degrees())
    h = c.cohomology_table()
    chi_h = sum((-1) ** n * d for n, d in h.items())
    assert chi_space == chi_h


def test_euler_additivity_short_exact_sequence():
    # 0 -> X -> Y -> Z -> 0 with Y an extension (upper-triangular d):
    # sum (-1)^n (h_X - h_Y + h_Z) = 0 over the full window
    one, zero = Fraction(1), Fraction(0)
    x_dims = {0: 1, 1: 1}
    z_dims = {0: 1, 1: 1}
    x_blocks = {0: [[one]]}  # exact
    z_blocks = {0: [[zero]]}  # zero differential
    # twist phi: Z^0 -> X^1 of degree +1 gluing the extension
    for phi in (zero, one):
        y_dims = {0: 2, 1: 2}
        y_blocks = {0: [[one, phi], [zero, zero]]}
        cx = _complex(x_dims, x_blocks)
        cy = _complex(y_dims, y_blocks)
        cz = _complex(z_dims, z_blocks)
        for c in (cx, cy, cz):
            c.check_differential()
        window = range(-1, 3)
        total = 0
        for n in window:
            hx, _ = cx.cohomology(n)
            hy, _ = cy.cohomology(n)
            hz, _ = cz.cohomology(n)
            total += (-1) ** n * (hx - hy + hz)
        assert total == 0


def test_mat_mul_shapes():
    a = [[Fraction(1), Fraction(2)]]
    b = [[Fraction(3)], [Fraction(4)]]
    assert mat_mul(Q, a, b) == [[Fraction(11)]]
    with pytest.raises(LinalgError):
        mat_mul(Q, a, a)
