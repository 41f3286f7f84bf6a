"""Deterministic scenario runner.

One scenario is a scripted timeline over a logical clock: honest parties
exchange wire messages through a single channel the intruder can tap,
and every send, delivery, interception, drop, verdict and state change
lands in an ordered transcript. The transcript is a pure function of the
scenario config, so runs can be diffed byte for byte and replayed.

Scenarios: an honest login round trip plus the four attacks from
`adversary`. The fixed timeline (registration at tick 0, login at tick
10, one tick per channel hop) keeps transcripts stable for any freshness
window of at least 2 ticks.
"""

import json
import random
import string
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .adversary import (
    INSIDER_SUPPLY_VERIFIER,
    CardSecrets,
    RegistrationRecord,
    Wordlist,
    forge_parallel_login,
    insider_change_password,
    intercept_and_drop,
    offline_guess,
    outsider_change_password,
)
from .blocks import BLOCK_LEN, Block
from .scheme import (
    DEFAULT_WINDOW,
    AuthServer,
    LoginRequest,
    ProtocolRejection,
    ServerResponse,
    SmartCard,
    UserSession,
    enroll,
    message_to_wire,
    password_digest,
    verify_mutual_auth,
)

VICTIM_ID = "alice"
ATTACKER_PASSWORD = "hijacked-by-mallory"

ACTORS = ("user", "card", "server", "intruder", "harness")
EVENT_KINDS = ("send", "intercept", "drop", "deliver", "verdict", "state-change")

_PASSWORD_ALPHABET = string.ascii_lowercase + string.digits


class ScenarioError(Exception):
    """A scenario could not run at all (as opposed to an attack failing)."""


class InvalidConfig(ScenarioError):
    pass


class MissingDictionary(ScenarioError):
    pass


class TranscriptParseError(ValueError):
    pass


class ReplayMismatch(Exception):
    """Replay diverged from the recorded transcript at event `seq`."""

    def __init__(self, seq: int):
        super().__init__(f"replay diverged at event seq {seq}")
        self.seq = seq


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class Clock:
    """Logical simulation clock; advances only by explicit positive steps."""

    def __init__(self, start: int = 0):
        if start < 0:
            raise ValueError("clock cannot start before tick 0")
        self.now = start

    def step(self, ticks: int = 1) -> int:
        if ticks < 1:
            raise ValueError("clock only moves forward")
        self.now += ticks
        return self.now


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a scenario run depends on; equal configs give
    byte-identical transcripts."""

    scenario: str
    seed: int = 0
    window: int = DEFAULT_WINDOW
    dictionary_path: Optional[str] = None

    def to_obj(self) -> dict:
        return {"scenario": self.scenario, "seed": self.seed,
                "window": self.window, "dictionary": self.dictionary_path}

    @classmethod
    def from_obj(cls, obj: dict) -> "ScenarioConfig":
        if set(obj) != {"scenario", "seed", "window", "dictionary"}:
            raise TranscriptParseError(f"bad config keys: {sorted(obj)}")
        return cls(scenario=obj["scenario"], seed=obj["seed"],
                   window=obj["window"], dictionary_path=obj["dictionary"])


@dataclass(frozen=True)
class Event:
    seq: int
    time: int
    actor: str
    kind: str
    payload: dict

    def to_obj(self) -> dict:
        return {"seq": self.seq, "time": self.time, "actor": self.actor,
                "kind": self.kind, "payload": self.payload}

    @classmethod
    def from_obj(cls, obj: dict) -> "Event":
        if set(obj) != {"seq", "time", "actor", "kind", "payload"}:
            raise TranscriptParseError(f"bad event keys: {sorted(obj)}")
        return cls(obj["seq"], obj["time"], obj["actor"], obj["kind"], obj["payload"])


@dataclass
class Transcript:
    """Ordered event log of one scenario run, with its config embedded."""

    config: ScenarioConfig
    events: list[Event] = field(default_factory=list)

    def record(self, time: int, actor: str, kind: str, payload: dict) -> Event:
        if actor not in ACTORS:
            raise ValueError(f"unknown actor {actor!r}")
        if kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {kind!r}")
        event = Event(len(self.events), time, actor, kind, payload)
        self.events.append(event)
        return event

    def final_verdict(self) -> Event:
        last = self.events[-1]
        if last.kind != "verdict" or last.payload.get("check") != "scenario":
            raise ValueError("transcript does not end in a scenario verdict")
        return last

    def outcome(self) -> str:
        return self.final_verdict().payload["outcome"]

    def to_jsonl(self) -> str:
        lines = [_dumps(self.config.to_obj())]
        lines.extend(_dumps(event.to_obj()) for event in self.events)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "Transcript":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines:
            raise TranscriptParseError("empty transcript")
        try:
            objs = [json.loads(line) for line in lines]
        except json.JSONDecodeError as exc:
            raise TranscriptParseError(f"bad JSON on line {exc.lineno}: {exc.msg}") from None
        transcript = cls(ScenarioConfig.from_obj(objs[0]))
        for position, obj in enumerate(objs[1:]):
            event = Event.from_obj(obj)
            if event.seq != position:
                raise TranscriptParseError(
                    f"event at position {position} carries seq {event.seq}")
            transcript.events.append(event)
        return transcript


class Channel:
    """Single insecure pipe between the parties. The intruder sits on it:
    it may copy the oldest in-flight message or remove it entirely.
    Whatever is sent is eventually delivered or explicitly dropped."""

    def __init__(self, transcript: Transcript, clock: Clock):
        self._transcript = transcript
        self._clock = clock
        self._in_flight: deque[tuple[int, object]] = deque()
        self._next_id = 1

    def _log(self, actor: str, kind: str, msg_id: int, message) -> None:
        self._transcript.record(self._clock.now, actor, kind,
                                {"msg_id": msg_id, "message": message_to_wire(message)})

    def send(self, sender: str, message) -> int:
        msg_id = self._next_id
        self._next_id += 1
        self._in_flight.append((msg_id, message))
        self._log(sender, "send", msg_id, message)
        return msg_id

    def intercept(self):
        """Intruder copies the oldest in-flight message without removing it."""
        if not self._in_flight:
            raise LookupError("nothing in flight to intercept")
        msg_id, message = self._in_flight[0]
        self._log("intruder", "intercept", msg_id, message)
        return message

    def deliver(self, receiver: str):
        if not self._in_flight:
            raise LookupError("nothing in flight to deliver")
        msg_id, message = self._in_flight.popleft()
        self._log(receiver, "deliver", msg_id, message)
        return message

    def drop(self):
        """Intruder removes the oldest in-flight message for good."""
        if not self._in_flight:
            raise LookupError("nothing in flight to drop")
        msg_id, message = self._in_flight.popleft()
        self._log("intruder", "drop", msg_id, message)
        return message

    @property
    def in_flight(self) -> int:
        return len(self._in_flight)


def _random_password(rng: random.Random, length: int = 10) -> str:
    return "".join(_PASSWORD_ALPHABET[b % len(_PASSWORD_ALPHABET)]
                   for b in rng.randbytes(length))


class _Run:
    """State threaded through one scenario script.

    All randomness comes from one seeded generator, drawn in a fixed
    order: master secret, card salt, then the victim password (picked
    from the wordlist when the scenario uses one).
    """

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.rng = random.Random(config.seed)
        self.clock = Clock()
        self.transcript = Transcript(config)
        self.channel = Channel(self.transcript, self.clock)
        self.server = AuthServer(Block(self.rng.randbytes(BLOCK_LEN)))
        self.salt = Block(self.rng.randbytes(BLOCK_LEN))
        self.wordlist: Optional[Wordlist] = None
        if config.scenario in WORDLIST_SCENARIOS:
            try:
                self.wordlist = Wordlist.load(config.dictionary_path)
            except OSError as exc:
                raise MissingDictionary(f"cannot read dictionary: {exc}") from None
            self.victim_password = self.wordlist.words[self.rng.randrange(len(self.wordlist))]
        else:
            self.victim_password = _random_password(self.rng)

    # -- event helpers -------------------------------------------------

    def note(self, actor: str, action: str, **detail) -> None:
        self.transcript.record(self.clock.now, actor, "state-change",
                               {"action": action, **detail})

    def verdict(self, actor: str, check: str, exc: Optional[ProtocolRejection],
                **detail) -> bool:
        payload = {"check": check, "outcome": "accept" if exc is None else "reject", **detail}
        if exc is not None:
            payload["reason"] = exc.reason
        self.transcript.record(self.clock.now, actor, "verdict", payload)
        return exc is None

    def scenario_verdict(self, outcome: str) -> Transcript:
        self.transcript.record(self.clock.now, "harness", "verdict",
                               {"check": "scenario", "outcome": outcome,
                                "scenario": self.config.scenario})
        return self.transcript

    # -- protocol fragments ---------------------------------------------

    def register_victim(self) -> SmartCard:
        card = enroll(self.server, VICTIM_ID, self.victim_password, self.salt)
        self.note("server", "account-registered", id=VICTIM_ID,
                  counter=self.server.accounts[VICTIM_ID])
        self.note("card", "card-issued", id=VICTIM_ID)
        return card

    def server_verify(self, request: LoginRequest) -> Optional[ServerResponse]:
        try:
            response = self.server.verify_login(request, self.clock.now, self.config.window)
        except ProtocolRejection as exc:
            self.verdict("server", "login", exc)
            return None
        self.verdict("server", "login", None)
        return response

    def user_verify(self, session: UserSession, response: ServerResponse,
                    actor: str = "user") -> bool:
        try:
            verify_mutual_auth(session, response, self.config.window)
        except ProtocolRejection as exc:
            return self.verdict(actor, "mutual-auth", exc)
        return self.verdict(actor, "mutual-auth", None)

    def login_roundtrip(self, card: SmartCard, password: str, *, sender: str = "card",
                        receiver: str = "user", tap_request: bool = False,
                        tap_response: bool = False):
        """One full login exchange: send, deliver, verify, reply, check.

        Returns (request, response, accepted); response is None when the
        server rejected. `tap_*` make the intruder copy messages in
        flight.
        """
        request, session = card.login(VICTIM_ID, password, self.clock.now)
        self.channel.send(sender, request)
        if tap_request:
            self.channel.intercept()
        self.clock.step()
        delivered = self.channel.deliver("server")
        response = self.server_verify(delivered)
        if response is None:
            return request, None, False
        self.channel.send("server", response)
        if tap_response:
            self.channel.intercept()
        self.clock.step()
        arrived = self.channel.deliver(receiver)
        accepted = self.user_verify(session, arrived, actor=receiver)
        return request, response, accepted

    def breach_and_guess(self, card: SmartCard, request: LoginRequest):
        """Card-secret extraction followed by the offline dictionary scan."""
        secrets = CardSecrets.from_card(card)
        self.note("intruder", "breach-card-secrets",
                  verifier=secrets.verifier.hex(),
                  masked_verifier=secrets.masked_verifier.hex(),
                  salt=secrets.salt.hex())
        found = offline_guess(secrets, request, self.wordlist)
        if found is None:
            self.note("intruder", "offline-guess", result="not-found",
                      password=None, probes=len(self.wordlist),
                      wordlist_size=len(self.wordlist))
        else:
            self.note("intruder", "offline-guess", result="found",
                      password=found[0],
                      probes=self.wordlist.words.index(found[0]) + 1,
                      wordlist_size=len(self.wordlist))
        return found


# -- the five scenarios ------------------------------------------------


def _scenario_honest(run: _Run) -> Transcript:
    card = run.register_victim()
    run.clock.step(10)
    *_, accepted = run.login_roundtrip(card, run.victim_password)
    return run.scenario_verdict("accepted" if accepted else "rejected")


def _scenario_offline_guess(run: _Run) -> Transcript:
    card = run.register_victim()
    run.clock.step(10)
    request, _, _ = run.login_roundtrip(card, run.victim_password, tap_request=True)
    found = run.breach_and_guess(card, request)
    recovered = found is not None and found[0] == run.victim_password
    return run.scenario_verdict("attack-succeeded" if recovered else "attack-failed")


def _scenario_outsider_change(run: _Run) -> Transcript:
    card = run.register_victim()
    run.clock.step(10)
    request, _, _ = run.login_roundtrip(card, run.victim_password, tap_request=True)
    found = run.breach_and_guess(card, request)
    if found is None:
        return run.scenario_verdict("attack-failed")
    run.clock.step()
    try:
        outsider_change_password(card, found[0], ATTACKER_PASSWORD)
        changed = run.verdict("card", "password-change", None, by="intruder")
    except ProtocolRejection as exc:
        changed = run.verdict("card", "password-change", exc, by="intruder")
    run.clock.step()
    *_, victim_ok = run.login_roundtrip(card, run.victim_password)
    run.clock.step()
    *_, attacker_ok = run.login_roundtrip(card, ATTACKER_PASSWORD,
                                          sender="intruder", receiver="intruder")
    succeeded = changed and not victim_ok and attacker_ok
    return run.scenario_verdict("attack-succeeded" if succeeded else "attack-failed")


def _scenario_insider_change(run: _Run) -> Transcript:
    card = run.register_victim()
    record = RegistrationRecord(password_digest(run.victim_password, run.salt),
                                card.verifier, card.masked_verifier)
    run.note("intruder", "insider-recorded",
             password_digest=record.password_digest.hex(),
             verifier=record.verifier.hex(),
             masked_verifier=record.masked_verifier.hex())
    run.clock.step(10)
    try:
        insider_change_password(card, record, ATTACKER_PASSWORD,
                                mode=INSIDER_SUPPLY_VERIFIER)
        changed = run.verdict("card", "password-change", None,
                              by="intruder", mode=INSIDER_SUPPLY_VERIFIER)
    except ProtocolRejection as exc:
        changed = run.verdict("card", "password-change", exc,
                              by="intruder", mode=INSIDER_SUPPLY_VERIFIER)
    run.clock.step()
    *_, victim_ok = run.login_roundtrip(card, run.victim_password)
    run.clock.step()
    *_, attacker_ok = run.login_roundtrip(card, ATTACKER_PASSWORD,
                                          sender="intruder", receiver="intruder")
    succeeded = changed and not victim_ok and attacker_ok
    return run.scenario_verdict("attack-succeeded" if succeeded else "attack-failed")


def _scenario_parallel_session(run: _Run) -> Transcript:
    card = run.register_victim()
    run.clock.step(10)
    request, response, _ = run.login_roundtrip(card, run.victim_password,
                                               tap_request=True, tap_response=True)
    forged = forge_parallel_login(request, response)
    run.channel.send("intruder", forged)
    run.clock.step()
    delivered = run.channel.deliver("server")
    second = run.server_verify(delivered)
    if second is not None:
        run.channel.send("server", second)
        intercept_and_drop(run.channel)
    return run.scenario_verdict("attack-succeeded" if second is not None else "attack-failed")


SCENARIOS: dict[str, Callable[[_Run], Transcript]] = {
    "honest": _scenario_honest,
    "offline-guess": _scenario_offline_guess,
    "outsider-change": _scenario_outsider_change,
    "insider-change": _scenario_insider_change,
    "parallel-session": _scenario_parallel_session,
}

WORDLIST_SCENARIOS = frozenset({"offline-guess", "outsider-change"})


def run_scenario(config: ScenarioConfig) -> Transcript:
    """Execute a named scenario deterministically from its config."""
    if config.scenario not in SCENARIOS:
        raise InvalidConfig(f"unknown scenario {config.scenario!r}, "
                            f"expected one of {sorted(SCENARIOS)}")
    if not isinstance(config.seed, int) or isinstance(config.seed, bool):
        raise InvalidConfig("seed must be an integer")
    if not isinstance(config.window, int) or config.window < 1:
        raise InvalidConfig("window must be a positive tick count")
    if config.scenario in WORDLIST_SCENARIOS and config.dictionary_path is None:
        raise MissingDictionary(f"scenario {config.scenario!r} needs a dictionary")
    return SCENARIOS[config.scenario](_Run(config))


def replay_transcript(path: str | Path) -> int:
    """Re-run a transcript file's embedded config and compare line by line.

    Returns the number of verified events. Raises ReplayMismatch at the
    first diverging event, TranscriptParseError on a malformed file.
    """
    text = Path(path).read_text(encoding="utf-8")
    recorded = Transcript.from_jsonl(text)
    fresh = run_scenario(recorded.config)

    recorded_lines = text.split("\n")[1:]
    if recorded_lines and recorded_lines[-1] == "":
        recorded_lines.pop()
    fresh_lines = fresh.to_jsonl().split("\n")[1:-1]
    for seq, (old, new) in enumerate(zip(recorded_lines, fresh_lines)):
        if old != new:
            raise ReplayMismatch(seq)
    if len(recorded_lines) != len(fresh_lines):
        raise ReplayMismatch(min(len(recorded_lines), len(fresh_lines)))
    return len(fresh_lines)
