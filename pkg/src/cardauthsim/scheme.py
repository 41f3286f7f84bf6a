"""Honest parties of the smart-card login scheme.

The scheme has four phases. At registration the user picks a random salt
block, hashes it against the password and sends the digest to the server,
which answers with a card holding a per-registration verifier and the
verifier masked by that digest. At login the card unmasks the verifier
with the keyed password and proves possession by hashing it against the
reader clock. The server recomputes the verifier from its master secret
and the account's registration counter and checks the proof, answering
with the symmetric proof over its own clock for mutual authentication.
The card alone performs password changes by re-masking the verifier.

The card cannot tell a wrong password at login, only the server can; the
password-change phase does check it locally, and that asymmetry is what
the attacks in `adversary` exploit.
"""

from dataclasses import dataclass

from .blocks import (
    Block,
    digest,
    encode_password,
    encode_registered_identity,
    encode_timestamp,
    validate_identity,
    validate_password,
    xor,
)

DEFAULT_WINDOW = 5


class ProtocolRejection(Exception):
    """A party refused a protocol step; `reason` names which check failed."""

    reason = "rejected"

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.reason)


class UnknownIdentity(ProtocolRejection):
    reason = "unknown-identity"


class StaleTimestamp(ProtocolRejection):
    reason = "stale-timestamp"


class BadAuthenticator(ProtocolRejection):
    reason = "bad-authenticator"


class PasswordChangeRejected(ProtocolRejection):
    reason = "wrong-old-password"


@dataclass(frozen=True)
class LoginRequest:
    """Wire message from card to server: (identity, proof, reader clock)."""

    identity: str
    authenticator: Block
    timestamp: int


@dataclass(frozen=True)
class ServerResponse:
    """Wire message from server to user: (proof, server clock)."""

    authenticator: Block
    timestamp: int


@dataclass(frozen=True)
class UserSession:
    """What the user side retains between sending a login and checking the reply."""

    secret: Block
    sent_at: int


def password_digest(password: str, salt: Block) -> Block:
    """Hash of the salted password; the only password-derived value ever sent."""
    return digest(xor(salt, encode_password(password)))


@dataclass
class SmartCard:
    """Issued card state: the verifier, the verifier masked by the
    password digest, and the salt the user keyed in at registration."""

    verifier: Block
    masked_verifier: Block
    salt: Block

    def login(self, identity: str, password: str, timestamp: int) -> tuple[LoginRequest, UserSession]:
        """Build a login request for the keyed identity and password.

        Any password is accepted here; a wrong one just produces a proof
        the server will refuse.
        """
        secret = xor(self.masked_verifier, password_digest(password, self.salt))
        authenticator = digest(xor(secret, encode_timestamp(timestamp)))
        request = LoginRequest(validate_identity(identity), authenticator, timestamp)
        return request, UserSession(secret, timestamp)

    def change_password(self, old_password: str, new_password: str) -> None:
        """Re-mask the verifier under a new password, card-side only.

        The card checks the old password by unmasking: only the digest
        used at issue time (or the last accepted change) reproduces the
        stored verifier.
        """
        validate_password(new_password)
        candidate = xor(self.masked_verifier, password_digest(old_password, self.salt))
        if candidate != self.verifier:
            raise PasswordChangeRejected("old password does not unmask the verifier")
        self.masked_verifier = xor(candidate, password_digest(new_password, self.salt))


class AuthServer:
    """The verifier side: holds the master secret and, per identity, only
    a counter of how many times that identity registered."""

    def __init__(self, master_secret: Block):
        self.master_secret = master_secret
        self.accounts: dict[str, int] = {}

    def register(self, identity: str, pw_digest: Block) -> tuple[Block, Block]:
        """Create or refresh an account; returns the card secrets to issue.

        First registration stores counter 0, every re-registration
        increments it, which silently invalidates cards from earlier
        registrations of the same identity.
        """
        validate_identity(identity)
        if identity in self.accounts:
            self.accounts[identity] += 1
        else:
            self.accounts[identity] = 0
        verifier = self._verifier_for(identity)
        return verifier, xor(verifier, pw_digest)

    def _verifier_for(self, identity: str) -> Block:
        bound = encode_registered_identity(identity, self.accounts[identity])
        return digest(xor(bound, self.master_secret))

    def verify_login(self, request: LoginRequest, received_at: int,
                     window: int = DEFAULT_WINDOW) -> ServerResponse:
        """Check a login request received at the server's current tick.

        Raises UnknownIdentity for unregistered or malformed identities,
        StaleTimestamp when the request clock falls outside
        [received_at - window, received_at], BadAuthenticator when the
        proof does not match. On success returns the mutual-auth reply.
        """
        try:
            validate_identity(request.identity)
        except ValueError as exc:
            raise UnknownIdentity(str(exc)) from None
        if request.identity not in self.accounts:
            raise UnknownIdentity(f"no account for {request.identity!r}")
        if not 0 <= received_at - request.timestamp <= window:
            raise StaleTimestamp(
                f"login stamped {request.timestamp} received at {received_at}, window {window}")
        verifier = self._verifier_for(request.identity)
        expected = digest(xor(verifier, encode_timestamp(request.timestamp)))
        if request.authenticator != expected:
            raise BadAuthenticator("login proof does not match this account")
        return ServerResponse(digest(xor(verifier, encode_timestamp(received_at))), received_at)


def verify_mutual_auth(session: UserSession, response: ServerResponse,
                       window: int = DEFAULT_WINDOW) -> None:
    """User-side check of the server's reply for the given login session.

    Raises StaleTimestamp or BadAuthenticator; returns silently when the
    responder proved knowledge of the session secret.
    """
    if not 0 <= response.timestamp - session.sent_at <= window:
        raise StaleTimestamp(
            f"reply stamped {response.timestamp} for a login sent at {session.sent_at}")
    if response.authenticator != digest(xor(session.secret, encode_timestamp(response.timestamp))):
        raise BadAuthenticator("server reply does not prove the session secret")


def enroll(server: AuthServer, identity: str, password: str, salt: Block) -> SmartCard:
    """Run the whole registration phase and hand back the issued card."""
    verifier, masked = server.register(identity, password_digest(password, salt))
    return SmartCard(verifier, masked, salt)


def message_to_wire(message: LoginRequest | ServerResponse) -> dict:
    """Serialise a wire message to its JSON object form."""
    if isinstance(message, LoginRequest):
        return {"type": "login", "id": message.identity,
                "c2": message.authenticator.hex(), "t": message.timestamp}
    if isinstance(message, ServerResponse):
        return {"type": "response", "c3": message.authenticator.hex(), "t": message.timestamp}
    raise TypeError(f"not a wire message: {message!r}")


def message_from_wire(obj: dict) -> LoginRequest | ServerResponse:
    """Parse the JSON object form back into a wire message."""
    kind = obj.get("type")
    if kind == "login":
        return LoginRequest(obj["id"], Block.from_hex(obj["c2"]), int(obj["t"]))
    if kind == "response":
        return ServerResponse(Block.from_hex(obj["c3"]), int(obj["t"]))
    raise ValueError(f"unknown wire message type: {kind!r}")
