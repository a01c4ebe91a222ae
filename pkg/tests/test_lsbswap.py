import random

import pytest

from palqa.lsbswap import LsbPlane, OnesList, encode_ones, join, regenerate, split_lsb
from palqa.transform import SparseCoeff


def _coeffs_at(xs):
    return [
        SparseCoeff(block_index=0, x=x, y=i % 8, sign=1, magnitude=1)
        for i, x in enumerate(xs)
    ]


def test_split_lsb_example():
    x_high, plane = split_lsb(_coeffs_at([0, 1, 2, 7]))
    assert x_high == [0, 0, 1, 3]
    assert plane.bits.tolist() == [0, 1, 0, 1]


def test_split_lsb_empty():
    x_high, plane = split_lsb([])
    assert x_high == [] and len(plane) == 0


def test_encode_ones_examples():
    assert encode_ones(LsbPlane((0,) * 8)) == OnesList(total=8, indices=())
    assert encode_ones(LsbPlane((0, 0, 1, 0, 0, 1, 0, 0))) == OnesList(8, (2, 5))


def test_regenerate_all_zero_condition():
    assert regenerate(OnesList(total=6, indices=())) == LsbPlane((0,) * 6)


def test_regenerate_example():
    assert regenerate(OnesList(8, (2, 5))) == LsbPlane((0, 0, 1, 0, 0, 1, 0, 0))


def test_oneslist_validation():
    with pytest.raises(ValueError):
        OnesList(total=4, indices=(4,))
    with pytest.raises(ValueError):
        OnesList(total=4, indices=(2, 2))
    with pytest.raises(ValueError):
        OnesList(total=4, indices=(3, 1))


def test_join_examples():
    assert join([0, 0, 1, 3], LsbPlane((0, 1, 0, 1))) == [0, 1, 2, 7]
    assert join([0, 1, 2, 3], LsbPlane((0, 0, 0, 0))) == [0, 2, 4, 6]


def test_join_rejects_bad_input():
    with pytest.raises(ValueError):
        join([0, 1], LsbPlane((0,)))
    with pytest.raises(ValueError):
        join([4], LsbPlane((0,)))


def test_plane_round_trip_random():
    rng = random.Random(19)
    for _ in range(10_000):
        n = rng.randrange(0, 64)
        bits = tuple(rng.randrange(2) for _ in range(n))
        plane = LsbPlane(bits)
        ones = encode_ones(plane)
        assert len(ones.indices) == sum(bits)  # popcount oracle
        assert regenerate(ones) == plane


def test_positions_round_trip_random():
    rng = random.Random(20)
    for _ in range(10_000):
        xs = [rng.randrange(8) for _ in range(rng.randrange(0, 40))]
        x_high, plane = split_lsb(_coeffs_at(xs))
        assert join(x_high, regenerate(encode_ones(plane))) == xs
