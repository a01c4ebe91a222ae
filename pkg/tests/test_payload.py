import numpy as np
import pytest

from palqa.errors import FormatError
from palqa.lsbswap import OnesList, encode_ones, split_lsb
from palqa.payload import body_bit_count, bpp, deserialize, serialize
from palqa.transform import SparseCoeff


def _coeff(x, y, magnitude, sign=1, block=0):
    return SparseCoeff(block_index=block, x=x, y=y, sign=sign, magnitude=magnitude)


def _pack(coeffs, dims, q):
    x_high, plane = split_lsb(coeffs)
    ones = encode_ones(plane)
    return serialize(coeffs, x_high, ones, dims, q), x_high, ones


def test_header_only_payload_is_20_bytes():
    data, _, _ = _pack([], (8, 8), 16)
    assert len(data) == 20
    assert data[:4] == b"PALQ"
    assert data[4] == 1 and data[5] == 8


def test_single_coefficient_single_block_is_22_bytes():
    # record = 0 block bits + 4 + 3 + 1 + 8 = 16 bits = 2 bytes
    data, _, _ = _pack([_coeff(0, 0, 1)], (8, 8), 8)
    assert len(data) == 22
    assert body_bit_count(1, 0, (8, 8)) == 16


def test_round_trip_identity_random():
    rng = np.random.default_rng(30)
    for _ in range(1000):
        width = int(rng.integers(1, 64))
        height = int(rng.integers(1, 64))
        grid_w = (width + 7) // 8
        grid_h = (height + 7) // 8
        nblocks = grid_w * grid_h
        q = int(rng.integers(1, 200))
        seen = set()
        coeffs = []
        for _ in range(int(rng.integers(0, 24))):
            key = (int(rng.integers(0, nblocks)), int(rng.integers(0, 8)), int(rng.integers(0, 8)))
            if key in seen:
                continue
            seen.add(key)
            coeffs.append(
                _coeff(key[2], key[1], int(rng.integers(1, 256)),
                       sign=int(rng.choice([-1, 1])), block=key[0])
            )
        coeffs.sort(key=lambda c: (c.block_index, c.y, c.x))
        data, x_high, ones = _pack(coeffs, (width, height), q)
        got_coeffs, got_x_high, got_ones, got_dims, got_q = deserialize(data)
        assert got_coeffs == coeffs
        assert got_x_high == x_high
        assert got_ones == ones
        assert got_dims == (width, height)
        assert got_q == q
        # and byte-exact in the other direction
        assert serialize(got_coeffs, got_x_high, got_ones, got_dims, got_q) == data


def test_deserialize_rejects_corruption():
    data, _, _ = _pack([_coeff(1, 2, 30, sign=-1)], (16, 16), 8)
    bad_magic = b"PALX" + data[4:]
    with pytest.raises(FormatError):
        deserialize(bad_magic)
    bad_version = data[:4] + bytes([9]) + data[5:]
    with pytest.raises(FormatError):
        deserialize(bad_version)
    with pytest.raises(FormatError):
        deserialize(data[:20])  # truncated after header
    with pytest.raises(FormatError):
        deserialize(data[:10])  # truncated header
    with pytest.raises(FormatError):
        deserialize(data + b"\x00")  # trailing bytes


def test_deserialize_rejects_zero_magnitude():
    # hand-built: one coefficient record with magnitude 0
    header = b"PALQ" + bytes([1, 8]) + (8).to_bytes(2, "big") * 2
    header += (8).to_bytes(2, "big") + (1).to_bytes(4, "big") + (0).to_bytes(4, "big")
    body = bytes(2)  # all-zero record: y=0 x_high=0 sign=0 magnitude=0
    with pytest.raises(FormatError):
        deserialize(header + body)


def test_deserialize_rejects_out_of_range_ones_index():
    coeffs = [_coeff(1, 0, 5)]
    x_high, plane = split_lsb(coeffs)
    ones = encode_ones(plane)
    data = serialize(coeffs, x_high, ones, (8, 8), 8)
    # ones index field is 1 bit; flip it from 0 to 1 (>= coeff_count)
    body = bytearray(data[20:])
    body[2] ^= 0x80
    with pytest.raises(FormatError):
        deserialize(data[:20] + bytes(body))


def test_serialize_validates_inputs():
    with pytest.raises(ValueError):
        serialize([], [], OnesList(0, ()), (0, 8), 8)
    with pytest.raises(ValueError):
        serialize([], [], OnesList(0, ()), (8, 8), 0)
    with pytest.raises(ValueError):
        serialize([_coeff(0, 0, 1)], [], OnesList(1, ()), (8, 8), 8)
    with pytest.raises(ValueError):
        serialize([_coeff(0, 0, 1, block=400)], [0], OnesList(1, ()), (8, 8), 8)


def test_bpp_arithmetic():
    data, _, _ = _pack([], (8, 8), 16)
    assert bpp(data, (8, 8)) == 160 / 64 == 2.5
    assert bpp(data, (8, 16)) == pytest.approx(bpp(data, (8, 8)) / 2)
    assert bpp(data, (1000, 1000)) >= 8 * 20 / 1_000_000


def test_ones_list_bit_width_matches_contract():
    # 5 coefficients, 3 odd: indices cost ceil(log2 5) = 3 bits each
    coeffs = [_coeff(x, 0, 2) for x in (0, 1, 2, 3, 5)]
    data, _x, ones = _pack(coeffs, (8, 8), 8)
    assert len(ones.indices) == 3
    bits = body_bit_count(5, 3, (8, 8))
    assert bits == 5 * 16 + 3 * 3
    assert len(data) == 20 + (bits + 7) // 8
