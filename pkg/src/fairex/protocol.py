"""Deterministic per-role state machines for the three exchange protocols.

Protocol variants:

* common: both clients sign one agreed message m.
* linked: two files M_A, M_B; each client signs its own file concatenated
  with the hash of the other (m_A = M_A || H(M_B), m_B = M_B || H(M_A)),
  so neither signature is meaningful without both files.
* data-for-sig: B trades a confidential payload M for A's signature on
  H(M); A starts out knowing only the hash.

The wire sequence is the same everywhere: A opens with an encrypted,
certified signature; B answers with a counter-signature (or the data);
A closes with the plaintext signature.  If A's closing message is
missing or invalid, B escalates to the STTP with both ciphertexts and
both certificates; the STTP checks the certificates and, only if both
pass, blind-decrypts A's ciphertext for B and forwards B's ciphertext
to A.

Machines are advanced by explicit step calls and never share state;
timeouts are abstract tick counts injected by the orchestrator, so runs
are fully replayable from a seed.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field

from .arith import Rng, int_from_bytes, int_to_bytes
from .cembs import (
    BlindCommitment,
    CembsCertificate,
    CembsContext,
    blind_commit,
    cembs_verify,
    encrypt_and_certify,
    sample_nonces,
)
from .elgamal import BlindHalf, ElgCiphertext, blind_half, elg_decrypt, unblind
from .errors import EmbeddingError, ParameterError, SetupError
from .keys import SystemParams, validate_params
from .rsa import Message, rep_from_hash, message_rep, rsa_sign, rsa_verify
from .wire import MsgType, WireMessage


class Protocol(enum.Enum):
    COMMON_MESSAGE = "common"
    LINKED_FILES = "linked"
    DATA_FOR_SIGNATURE = "data-for-sig"


class Timeout:
    """Marker delivered to a party whose wait deadline has passed."""

    def __repr__(self):  # pragma: no cover
        return "Timeout()"


@dataclass
class SessionConfig:
    protocol: Protocol
    params: SystemParams
    payload: bytes | tuple[bytes, bytes]
    seed: bytes
    timeout: int = 8
    tick_budget: int = 200
    rep_mode: str = "hashed"  # common-message protocol only

    def __post_init__(self):
        if self.protocol is Protocol.LINKED_FILES:
            if not (isinstance(self.payload, tuple) and len(self.payload) == 2):
                raise ParameterError("linked-files protocol needs a (file_a, file_b) payload")
        elif not isinstance(self.payload, bytes):
            raise ParameterError(f"{self.protocol.value} protocol needs a bytes payload")
        if len(self.seed) != 32:
            raise ParameterError("session seed must be 32 bytes")
        if self.timeout < 1:
            raise ParameterError("timeout must be at least one tick")


@dataclass
class PartyState:
    role: str
    phase: str
    acquired: int | bytes | None = None
    verdict: str = "pending"  # pending | success | aborted | recovered
    violations: list[str] = field(default_factory=list)


def link_messages(file_a: bytes, file_b: bytes) -> tuple[bytes, bytes]:
    """m_A = M_A || H(M_B) and m_B = M_B || H(M_A), as raw byte strings."""
    return (
        file_a + hashlib.sha256(file_b).digest(),
        file_b + hashlib.sha256(file_a).digest(),
    )


def check_data_matches(data: bytes, expected_hash: int) -> bool:
    """Does SHA-256(data), read big-endian, equal the expected value?"""
    return int_from_bytes(hashlib.sha256(data).digest()) == expected_hash


def data_as_int(data: bytes) -> int:
    """Integer embedding of a data payload; must round-trip exactly."""
    value = int_from_bytes(data)
    if value <= 0 or int_to_bytes(value) != data:
        raise EmbeddingError("data payload must be non-empty with no leading zero byte")
    return value


def a_signature_rep(cfg: SessionConfig) -> int:
    """The representative A's signature is issued on."""
    n = cfg.params.a_rsa.n
    if cfg.protocol is Protocol.COMMON_MESSAGE:
        return message_rep(cfg.payload, n, cfg.rep_mode).rep
    if cfg.protocol is Protocol.LINKED_FILES:
        return message_rep(link_messages(*cfg.payload)[0], n, "hashed").rep
    return message_rep(cfg.payload, n, "hashed").rep  # signature on H(M)


def b_signature_rep(cfg: SessionConfig) -> int:
    """The representative B's counter-signature is issued on (no data protocol)."""
    if cfg.protocol is Protocol.DATA_FOR_SIGNATURE:
        raise ParameterError("the data-for-signature protocol has no counter-signature")
    n = cfg.params.b_rsa.n
    if cfg.protocol is Protocol.COMMON_MESSAGE:
        return message_rep(cfg.payload, n, cfg.rep_mode).rep
    return message_rep(link_messages(*cfg.payload)[1], n, "hashed").rep


def _int_fields(msg: WireMessage) -> list[int]:
    return [int_from_bytes(f) for f in msg.fields]


class _Party:
    """Shared plumbing: state, deadline bookkeeping, message construction."""

    role = ""

    def __init__(self, cfg: SessionConfig, session_id: bytes):
        self.cfg = cfg
        self.session_id = session_id
        self.state = PartyState(role=self.role, phase="start")
        self.deadline: int | None = None

    def _msg(self, msg_type: MsgType, values: list[int | bytes]) -> WireMessage:
        fields = tuple(v if isinstance(v, bytes) else int_to_bytes(v) for v in values)
        return WireMessage(msg_type=msg_type, session_id=self.session_id, fields=fields)

    def _violation(self, incoming, note: str = "out-of-phase message") -> list:
        kind = incoming.msg_type.name if isinstance(incoming, WireMessage) else type(incoming).__name__
        self.state.violations.append(f"{note}: {kind} in phase {self.state.phase}")
        return []

    def _finish(self, verdict: str) -> None:
        self.state.verdict = verdict
        self.state.phase = "done"
        self.deadline = None


class ClientA(_Party):
    """Initiator: offers the certified encrypted signature, releases it only
    after checking B's step-2 reply, passively receives B's ciphertext if
    the STTP had to step in."""

    role = "A"

    def __init__(self, cfg: SessionConfig, session_id: bytes, rng: Rng):
        super().__init__(cfg, session_id)
        self.rng = rng
        self.rsa = cfg.params.a_rsa
        self.elg = cfg.params.a_elg
        self.base = cfg.params.commit_base
        self.b_pub = cfg.params.b_rsa.pub
        self.a_ctx = CembsContext.a_side(cfg.params)
        if cfg.protocol is Protocol.DATA_FOR_SIGNATURE:
            # A knows only the hash of the data she is buying.
            digest = hashlib.sha256(cfg.payload).digest()
            self.expected_hash = int_from_bytes(digest)
            self.own_rep = rep_from_hash(digest, self.rsa.n)
        else:
            self.expected_hash = None
            self.own_rep = a_signature_rep(cfg)
            self.b_rep = b_signature_rep(cfg)
        self.signature = rsa_sign(Message(raw=b"", rep=self.own_rep), self.rsa)

    def step(self, incoming: WireMessage | Timeout | None, now: int = 0) -> list[tuple[str, WireMessage]]:
        if incoming is None:
            if self.state.phase != "start":
                return self._violation(incoming, "spurious kickoff")
            nonces = sample_nonces(self.a_ctx.group[0], self.rng)
            ct, cert = encrypt_and_certify(self.signature.s, self.a_ctx, nonces)
            self.state.phase = "wait_step2"
            self.deadline = now + self.cfg.timeout
            return [("B", self._msg(MsgType.CEMBS_OFFER, [ct.W, ct.V, cert.c, cert.r]))]

        if isinstance(incoming, Timeout):
            if self.state.phase == "wait_step2":
                # Nothing of B's in hand and no dispute path of her own.
                self._finish("aborted")
            return []

        if incoming.msg_type is MsgType.FORWARD_CIPHERTEXT:
            return self._on_forward(incoming)
        if incoming.msg_type is MsgType.COUNTER_SIGNATURE and self.state.phase == "wait_step2":
            return self._on_counter_signature(incoming)
        if incoming.msg_type is MsgType.DATA_PAYLOAD and self.state.phase == "wait_step2":
            return self._on_data(incoming)
        return self._violation(incoming)

    def _on_counter_signature(self, incoming: WireMessage) -> list:
        if self.cfg.protocol is Protocol.DATA_FOR_SIGNATURE:
            return self._violation(incoming)
        (s_b,) = _int_fields(incoming)
        if rsa_verify(s_b, Message(raw=b"", rep=self.b_rep), self.b_pub):
            self.state.acquired = s_b
            self._finish("success")
            return [("B", self._msg(MsgType.FINAL_SIGNATURE, [self.signature.s]))]
        self._finish("aborted")  # refuse to release s_A
        return []

    def _on_data(self, incoming: WireMessage) -> list:
        if self.cfg.protocol is not Protocol.DATA_FOR_SIGNATURE:
            return self._violation(incoming)
        data = incoming.fields[0]
        if check_data_matches(data, self.expected_hash):
            self.state.acquired = data
            self._finish("success")
            return [("B", self._msg(MsgType.FINAL_SIGNATURE, [self.signature.s]))]
        self._finish("aborted")  # mismatching data: send nothing
        return []

    def _on_forward(self, incoming: WireMessage) -> list:
        w_b, v_b = _int_fields(incoming)
        try:
            value = elg_decrypt(ElgCiphertext(W=w_b, V=v_b), self.elg)
        except (EmbeddingError, ParameterError):
            return self._violation(incoming, "undecryptable forwarded ciphertext")
        if self.cfg.protocol is Protocol.DATA_FOR_SIGNATURE:
            data = int_to_bytes(value)
            if not check_data_matches(data, self.expected_hash):
                return self._violation(incoming, "forwarded data does not match the agreed hash")
            self.state.acquired = data
        else:
            if not rsa_verify(value, Message(raw=b"", rep=self.b_rep), self.b_pub):
                return self._violation(incoming, "forwarded ciphertext holds no valid signature")
            self.state.acquired = value
        if self.state.verdict != "success":
            self._finish("recovered")
        return []


class ClientB(_Party):
    """Responder: checks the certificate before answering, and escalates to
    the STTP when the closing signature never arrives or fails to verify."""

    role = "B"

    def __init__(self, cfg: SessionConfig, session_id: bytes, rng: Rng):
        super().__init__(cfg, session_id)
        self.rng = rng
        self.rsa = cfg.params.b_rsa
        self.a_pub = cfg.params.a_rsa.pub
        self.base = cfg.params.commit_base
        self.sttp_p = cfg.params.sttp_elg.P
        self.a_ctx = CembsContext.a_side(cfg.params)
        self.b_ctx = CembsContext.b_side(cfg.params)
        self.state.phase = "wait_offer"
        self.deadline = cfg.timeout  # give up if the opening offer never comes
        if cfg.protocol is Protocol.DATA_FOR_SIGNATURE:
            self.data = cfg.payload
            self.a_rep = rep_from_hash(hashlib.sha256(self.data).digest(), cfg.params.a_rsa.n)
            self.signature = None
        else:
            self.data = None
            self.a_rep = a_signature_rep(cfg)
            self.signature = rsa_sign(Message(raw=b"", rep=b_signature_rep(cfg)), self.rsa)
        self.offer: tuple[int, int, int, int] | None = None  # (W_A, V_A, c_A, r_A)

    def step(self, incoming: WireMessage | Timeout | None, now: int = 0) -> list[tuple[str, WireMessage]]:
        if incoming is None:
            return []
        if isinstance(incoming, Timeout):
            return self._on_timeout(now)
        if incoming.msg_type is MsgType.CEMBS_OFFER and self.state.phase == "wait_offer":
            return self._on_offer(incoming, now)
        if incoming.msg_type is MsgType.FINAL_SIGNATURE and self.state.phase == "wait_final":
            return self._on_final(incoming, now)
        if incoming.msg_type is MsgType.BLIND_HALF_REPLY and self.state.phase == "wait_sttp":
            return self._on_blind_half(incoming)
        return self._violation(incoming)

    def _on_offer(self, incoming: WireMessage, now: int) -> list:
        w_a, v_a, c_a, r_a = _int_fields(incoming)
        commitment = blind_commit(v_a, self.base)
        cert = CembsCertificate(r=r_a, c=c_a)
        if not 0 < v_a < self.sttp_p or not cembs_verify(w_a, commitment, cert, self.a_ctx):
            self._finish("aborted")  # stop the protocol
            return []
        self.offer = (w_a, v_a, c_a, r_a)
        self.state.phase = "wait_final"
        self.deadline = now + self.cfg.timeout
        if self.cfg.protocol is Protocol.DATA_FOR_SIGNATURE:
            return [("A", self._msg(MsgType.DATA_PAYLOAD, [self.data]))]
        return [("A", self._msg(MsgType.COUNTER_SIGNATURE, [self.signature.s]))]

    def _on_final(self, incoming: WireMessage, now: int) -> list:
        (s_a,) = _int_fields(incoming)
        if rsa_verify(s_a, Message(raw=b"", rep=self.a_rep), self.a_pub):
            self.state.acquired = s_a
            self._finish("success")
            return []
        return self._recover(now)  # invalid closing signature: dispute

    def _on_timeout(self, now: int) -> list:
        if self.state.phase == "wait_final":
            return self._recover(now)
        if self.state.phase == "wait_offer":
            self._finish("aborted")  # never heard from A; nothing to dispute with
        elif self.state.phase == "wait_sttp":
            self.state.violations.append("arbiter unreachable")
            self._finish("aborted")
        return []

    def _recover(self, now: int) -> list:
        """Escalate: certify own ciphertext under A's key and ask the STTP."""
        w_a, v_a, c_a, r_a = self.offer
        value = data_as_int(self.data) if self.data is not None else self.signature.s
        nonces = sample_nonces(self.b_ctx.group[0], self.rng)
        ct, cert = encrypt_and_certify(value, self.b_ctx, nonces)
        commitment = blind_commit(v_a, self.base)
        self.state.phase = "wait_sttp"
        self.deadline = now + self.cfg.timeout
        fields = [w_a, commitment.C, c_a, r_a, ct.W, ct.V, cert.c, cert.r]
        return [("STTP", self._msg(MsgType.RECOVERY_REQUEST, fields))]

    def _on_blind_half(self, incoming: WireMessage) -> list:
        (half,) = _int_fields(incoming)
        _, v_a, _, _ = self.offer
        try:
            s_a = unblind(v_a, BlindHalf(value=half), self.sttp_p)
        except EmbeddingError:
            self.state.violations.append("unusable blind half from the arbiter")
            self._finish("aborted")
            return []
        if rsa_verify(s_a, Message(raw=b"", rep=self.a_rep), self.a_pub):
            self.state.acquired = s_a
            self._finish("recovered")
        else:
            self.state.violations.append("recovered value is not a valid signature")
            self._finish("aborted")
        return []


class Sttp(_Party):
    """Stateless arbiter: answers any recovery request whose two
    certificates verify, and answers identical requests identically."""

    role = "STTP"

    def __init__(self, cfg: SessionConfig, session_id: bytes):
        super().__init__(cfg, session_id)
        self.key = cfg.params.sttp_elg
        self.base = cfg.params.commit_base
        self.a_ctx = CembsContext.a_side(cfg.params)
        self.b_ctx = CembsContext.b_side(cfg.params)
        self.state.phase = "ready"

    def step(self, incoming: WireMessage | Timeout | None, now: int = 0) -> list[tuple[str, WireMessage]]:
        if incoming is None or isinstance(incoming, Timeout):
            return []
        if incoming.msg_type is not MsgType.RECOVERY_REQUEST:
            return self._violation(incoming)
        w_a, c_blind, c_a, r_a, w_b, v_b, c_b, r_b = _int_fields(incoming)
        offer_ok = cembs_verify(
            w_a, BlindCommitment(C=c_blind), CembsCertificate(r=r_a, c=c_a), self.a_ctx
        )
        reply_ok = cembs_verify(
            w_b, blind_commit(v_b, self.base), CembsCertificate(r=r_b, c=c_b), self.b_ctx
        )
        if not (offer_ok and reply_ok):
            self.state.violations.append(
                f"rejected recovery request (offer cert {'ok' if offer_ok else 'bad'}, "
                f"reply cert {'ok' if reply_ok else 'bad'})"
            )
            return []
        half = blind_half(w_a, self.key)
        return [
            ("B", self._msg(MsgType.BLIND_HALF_REPLY, [half.value])),
            ("A", self._msg(MsgType.FORWARD_CIPHERTEXT, [w_b, v_b])),
        ]


def build_parties(cfg: SessionConfig) -> tuple[dict[str, _Party], bytes]:
    """Instantiate the three machines with independent derived rngs."""
    problems = validate_params(cfg.params)
    if problems:
        raise SetupError(f"invalid parameters: {problems}")
    for name, value in (
        ("A's signing key", cfg.params.a_rsa.d),
        ("A's decryption key", cfg.params.a_elg.SK),
        ("STTP's decryption key", cfg.params.sttp_elg.SK),
    ):
        if value is None:
            raise SetupError(f"session needs {name}; load the private key file")
    if cfg.protocol is not Protocol.DATA_FOR_SIGNATURE and cfg.params.b_rsa.d is None:
        raise SetupError("session needs B's signing key; load the private key file")
    if cfg.protocol is Protocol.DATA_FOR_SIGNATURE:
        value = data_as_int(cfg.payload)
        if value >= cfg.params.a_elg.P:
            raise SetupError("data payload too large to embed under A's key")
    root = Rng(cfg.seed)
    session_id = root.child(b"session-id").random_bytes(16)
    parties: dict[str, _Party] = {
        "A": ClientA(cfg, session_id, root.child(b"party-a")),
        "B": ClientB(cfg, session_id, root.child(b"party-b")),
        "STTP": Sttp(cfg, session_id),
    }
    return parties, session_id
