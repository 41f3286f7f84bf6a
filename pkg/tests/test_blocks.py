"""Block domain: golden digests, XOR algebra, canonical encodings.

Expected digests here were computed with hashlib directly (the reference
oracle) before the implementation existed, then frozen.
"""

import hashlib

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cardauthsim.blocks import (
    BLOCK_LEN,
    GOLDEN_DIGESTS,
    ONES_BLOCK,
    ZERO_BLOCK,
    Block,
    digest,
    encode_identity,
    encode_password,
    encode_registered_identity,
    encode_timestamp,
    validate_identity,
    validate_password,
    xor,
)

# Frozen reference digests, sha256 over the two fixed test blocks.
F_ZERO = "66687aadf862bd776c8fc18b8e9f8e20089714856ee233b3902a591d0d5f2925"
F_ONES = "af9613760f72635fbdb44a5a0a63c39f12af30f950a6ee5c971be188e89c4051"

blocks = st.binary(min_size=BLOCK_LEN, max_size=BLOCK_LEN).map(Block)


def _sha(data: bytes) -> bytes:
    # independent oracle route, deliberately not cardauthsim.blocks.digest
    return hashlib.sha256(data).digest()


class TestBlock:
    def test_rejects_wrong_lengths(self):
        for n in (0, 1, 31, 33, 64):
            with pytest.raises(ValueError):
                Block(bytes(n))

    def test_hex_round_trip(self):
        block = Block(bytes(range(32)))
        assert len(block.hex()) == 64
        assert Block.from_hex(block.hex()) == block

    def test_from_hex_rejects_short_hex(self):
        with pytest.raises(ValueError):
            Block.from_hex("ab" * 31)

    def test_equality_is_bytewise(self):
        assert Block(bytes(32)) == bytes(32)
        assert Block(b"\x01" + bytes(31)) != Block(bytes(32))


class TestDigest:
    def test_deterministic(self):
        block = Block(b"\xa5" * 32)
        assert digest(block) == digest(block)

    def test_golden_zero_block(self):
        assert digest(ZERO_BLOCK).hex() == F_ZERO
        assert digest(ZERO_BLOCK) == _sha(bytes(32))

    def test_golden_ones_block(self):
        assert digest(ONES_BLOCK).hex() == F_ONES
        assert digest(ONES_BLOCK) == _sha(b"\xff" * 32)

    def test_fixed_test_blocks_hash_differently(self):
        assert digest(ZERO_BLOCK) != digest(ONES_BLOCK)

    def test_pinned_table_matches_implementation(self):
        assert GOLDEN_DIGESTS["zero-block"] == digest(ZERO_BLOCK).hex()
        assert GOLDEN_DIGESTS["ones-block"] == digest(ONES_BLOCK).hex()

    def test_rejects_non_block_input(self):
        with pytest.raises(ValueError):
            digest(b"short")

    def test_output_is_a_block(self):
        assert isinstance(digest(ZERO_BLOCK), Block)
        assert len(digest(ZERO_BLOCK)) == BLOCK_LEN


class TestXor:
    def test_self_inverse(self):
        block = Block(bytes(range(32)))
        assert xor(block, block) == ZERO_BLOCK

    def test_zero_identity(self):
        block = Block(bytes(range(32)))
        assert xor(block, ZERO_BLOCK) == block

    def test_rejects_wrong_lengths(self):
        with pytest.raises(ValueError):
            xor(b"short", ZERO_BLOCK)
        with pytest.raises(ValueError):
            xor(ZERO_BLOCK, bytes(33))

    @settings(max_examples=1000, deadline=None)
    @given(a=blocks, b=blocks)
    def test_involution(self, a, b):
        assert xor(xor(a, b), b) == a

    @settings(max_examples=1000, deadline=None)
    @given(a=blocks, b=blocks)
    def test_commutative(self, a, b):
        assert xor(a, b) == xor(b, a)

    @settings(max_examples=1000, deadline=None)
    @given(a=blocks, b=blocks, c=blocks)
    def test_associative(self, a, b, c):
        assert xor(xor(a, b), c) == xor(a, xor(b, c))


class TestValidation:
    def test_identity_rules(self):
        assert validate_identity("alice") == "alice"
        assert validate_identity("a" * 64) == "a" * 64
        for bad in ("", "a" * 65, "with space", "tab\tbed", "café"):
            with pytest.raises(ValueError):
                validate_identity(bad)

    def test_password_rules(self):
        assert validate_password("p") == "p"
        assert validate_password("café latte") == "café latte"
        for bad in ("", "a" * 65):
            with pytest.raises(ValueError):
                validate_password(bad)


class TestEncode:
    def test_deterministic(self):
        assert encode_identity("alice") == encode_identity("alice")
        assert encode_registered_identity("alice", 0) == encode_registered_identity("alice", 0)

    def test_identity_oracle(self):
        assert encode_identity("alice") == _sha(b"I" + b"alice")

    def test_counter_distinguishes_registrations(self):
        # oracle: the two serialisations differ in the counter suffix
        first = _sha(b"E" + b"alice" + (0).to_bytes(4, "big"))
        second = _sha(b"E" + b"alice" + (1).to_bytes(4, "big"))
        assert first != second
        assert encode_registered_identity("alice", 0) == first
        assert encode_registered_identity("alice", 1) == second

    def test_type_tags_separate_domains(self):
        # same text encoded as password vs identity must land on
        # different blocks; the tag byte forces distinct preimages
        assert _sha(b"P" + b"pw1") != _sha(b"I" + b"pw1")
        assert encode_password("pw1") == _sha(b"P" + b"pw1")
        assert encode_identity("pw1") == _sha(b"I" + b"pw1")
        assert encode_password("pw1") != encode_identity("pw1")

    def test_timestamp_oracle(self):
        assert encode_timestamp(10) == _sha(b"T" + (10).to_bytes(8, "big"))
        assert encode_timestamp(10) != encode_timestamp(11)

    def test_rejects_non_canonical_values(self):
        with pytest.raises(ValueError):
            encode_identity("")
        with pytest.raises(ValueError):
            encode_identity("x" * 65)
        with pytest.raises(ValueError):
            encode_password("")
        with pytest.raises(ValueError):
            encode_timestamp(-1)
        with pytest.raises(ValueError):
            encode_timestamp(2**64)
        with pytest.raises(ValueError):
            encode_registered_identity("alice", -1)
        with pytest.raises(ValueError):
            encode_registered_identity("alice", 2**32)

    @settings(max_examples=200, deadline=None)
    @given(ticks=st.integers(min_value=0, max_value=2**64 - 1))
    def test_timestamp_encoding_matches_oracle(self, ticks):
        assert encode_timestamp(ticks) == _sha(b"T" + ticks.to_bytes(8, "big"))
