"""Fixed-width block arithmetic underneath the authentication scheme.

Every secret, authenticator and masked value in the scheme lives in one
domain: 32-byte blocks combined with XOR and a one-way function. Values
that are not naturally 32 bytes wide (identities, passwords, counters,
clock ticks) are folded into the domain by `encode_*`, which prefixes a
type tag so different kinds of value can never collide.
"""

import hashlib

BLOCK_LEN = 32

# Length caps for the canonical text types.
MAX_TEXT_LEN = 64

_IDENTITY_TAG = b"I"
_PASSWORD_TAG = b"P"
_TIMESTAMP_TAG = b"T"
_REGISTRATION_TAG = b"E"

# Reference digests of the one-way function over two fixed test blocks,
# pinned so any change to the underlying hash is caught immediately.
GOLDEN_DIGESTS = {
    "zero-block": "66687aadf862bd776c8fc18b8e9f8e20089714856ee233b3902a591d0d5f2925",
    "ones-block": "af9613760f72635fbdb44a5a0a63c39f12af30f950a6ee5c971be188e89c4051",
}


class Block(bytes):
    """An opaque 32-byte value. Construction rejects any other length."""

    def __new__(cls, data: bytes) -> "Block":
        if len(data) != BLOCK_LEN:
            raise ValueError(f"block must be exactly {BLOCK_LEN} bytes, got {len(data)}")
        return super().__new__(cls, data)

    @classmethod
    def from_hex(cls, text: str) -> "Block":
        return cls(bytes.fromhex(text))


ZERO_BLOCK = Block(bytes(BLOCK_LEN))
ONES_BLOCK = Block(b"\xff" * BLOCK_LEN)


def _hash(data: bytes) -> Block:
    return Block(hashlib.sha256(data).digest())


def digest(block: bytes) -> Block:
    """One-way function over a block, realised as SHA-256."""
    if len(block) != BLOCK_LEN:
        raise ValueError(f"digest input must be a {BLOCK_LEN}-byte block")
    return _hash(block)


def xor(a: bytes, b: bytes) -> Block:
    """Byte-wise XOR of two blocks."""
    if len(a) != BLOCK_LEN or len(b) != BLOCK_LEN:
        raise ValueError(f"xor operands must be {BLOCK_LEN}-byte blocks")
    return Block(bytes(i ^ j for i, j in zip(a, b)))


def validate_identity(identity: str) -> str:
    """Check an identity is non-empty visible ASCII of at most 64 chars."""
    if not identity:
        raise ValueError("identity must not be empty")
    if len(identity) > MAX_TEXT_LEN:
        raise ValueError(f"identity longer than {MAX_TEXT_LEN} characters")
    if not all(0x21 <= ord(ch) <= 0x7E for ch in identity):
        raise ValueError("identity must be printable ASCII without whitespace")
    return identity


def validate_password(password: str) -> str:
    """Check a password is non-empty and at most 64 chars."""
    if not password:
        raise ValueError("password must not be empty")
    if len(password) > MAX_TEXT_LEN:
        raise ValueError(f"password longer than {MAX_TEXT_LEN} characters")
    return password


def encode_identity(identity: str) -> Block:
    return _hash(_IDENTITY_TAG + validate_identity(identity).encode("ascii"))


def encode_password(password: str) -> Block:
    return _hash(_PASSWORD_TAG + validate_password(password).encode("utf-8"))


def encode_timestamp(ticks: int) -> Block:
    """Fold a logical clock reading into the block domain."""
    if ticks < 0 or ticks >= 2**64:
        raise ValueError("timestamp out of range")
    return _hash(_TIMESTAMP_TAG + ticks.to_bytes(8, "big"))


def encode_registered_identity(identity: str, counter: int) -> Block:
    """Bind an identity to its registration counter.

    The counter is a fixed-width suffix, so the serialisation is
    unambiguous and re-registration yields a fresh block.
    """
    if counter < 0 or counter >= 2**32:
        raise ValueError("registration counter out of range")
    ident = validate_identity(identity).encode("ascii")
    return _hash(_REGISTRATION_TAG + ident + counter.to_bytes(4, "big"))
