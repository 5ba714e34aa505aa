"""Wire message encoding and the session transcript.

Binary layout of a message:

    msg_type (1 byte) || session_id (16 bytes) || field count (1 byte)
    || per field: length (4 bytes, big-endian) || field bytes

Integer fields use the minimal big-endian magnitude.  A transcript file
holds one delivered message per line, tab-separated:

    tick <TAB> sender <TAB> receiver <TAB> hex(message)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

from .errors import TranscriptError, WireError

SESSION_ID_BYTES = 16

ROLES = ("A", "B", "STTP")


class MsgType(enum.IntEnum):
    CEMBS_OFFER = 1         # W_A, V_A, c_A, r_A
    COUNTER_SIGNATURE = 2   # s_B
    FINAL_SIGNATURE = 3     # s_A
    DATA_PAYLOAD = 4        # M
    RECOVERY_REQUEST = 5    # W_A, C, c_A, r_A, W_B, V_B, c_B, r_B
    BLIND_HALF_REPLY = 6    # W_A^SK_T
    FORWARD_CIPHERTEXT = 7  # W_B, V_B

    @property
    def wire_name(self) -> str:
        return self.name.lower().replace("_", "-")

    @classmethod
    def from_wire_name(cls, name: str) -> "MsgType":
        try:
            return cls[name.upper().replace("-", "_")]
        except KeyError:
            raise WireError(f"unknown message type {name!r}") from None


ARITY = {
    MsgType.CEMBS_OFFER: 4,
    MsgType.COUNTER_SIGNATURE: 1,
    MsgType.FINAL_SIGNATURE: 1,
    MsgType.DATA_PAYLOAD: 1,
    MsgType.RECOVERY_REQUEST: 8,
    MsgType.BLIND_HALF_REPLY: 1,
    MsgType.FORWARD_CIPHERTEXT: 2,
}


@dataclass(frozen=True)
class WireMessage:
    msg_type: MsgType
    session_id: bytes
    fields: tuple[bytes, ...]

    def __post_init__(self):
        if len(self.session_id) != SESSION_ID_BYTES:
            raise WireError(f"session id must be {SESSION_ID_BYTES} bytes")
        if len(self.fields) != ARITY[self.msg_type]:
            raise WireError(
                f"{self.msg_type.name} carries {ARITY[self.msg_type]} fields, got {len(self.fields)}"
            )

    def encode(self) -> bytes:
        out = bytearray([self.msg_type.value])
        out += self.session_id
        out.append(len(self.fields))
        for f in self.fields:
            out += len(f).to_bytes(4, "big")
            out += f
        return bytes(out)

    @classmethod
    def decode(cls, data: bytes) -> "WireMessage":
        if len(data) < 1 + SESSION_ID_BYTES + 1:
            raise WireError("message too short")
        try:
            msg_type = MsgType(data[0])
        except ValueError:
            raise WireError(f"unknown message type byte {data[0]}") from None
        session_id = data[1 : 1 + SESSION_ID_BYTES]
        count = data[1 + SESSION_ID_BYTES]
        pos = 2 + SESSION_ID_BYTES
        fields = []
        for _ in range(count):
            if pos + 4 > len(data):
                raise WireError("truncated field length")
            length = int.from_bytes(data[pos : pos + 4], "big")
            pos += 4
            if pos + length > len(data):
                raise WireError("truncated field")
            fields.append(data[pos : pos + length])
            pos += length
        if pos != len(data):
            raise WireError("trailing bytes after last field")
        return cls(msg_type=msg_type, session_id=session_id, fields=tuple(fields))


@dataclass(frozen=True)
class TranscriptRecord:
    tick: int
    sender: str
    receiver: str
    message: WireMessage


@dataclass
class Transcript:
    """Append-only log of every delivered message, plus out-of-band notes.

    Notes (protocol violations, STTP rejections) are simulation metadata
    and are not part of the transcript file format.
    """

    records: list[TranscriptRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, tick: int, sender: str, receiver: str, message: WireMessage) -> None:
        self.records.append(TranscriptRecord(tick, sender, receiver, message))

    def note(self, text: str) -> None:
        self.notes.append(text)

    def to_text(self) -> str:
        lines = [
            f"{rec.tick}\t{rec.sender}\t{rec.receiver}\t{rec.message.encode().hex()}"
            for rec in self.records
        ]
        return "".join(line + "\n" for line in lines)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "Transcript":
        transcript = cls()
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise TranscriptError(f"line {lineno}: expected 4 tab-separated columns")
            tick_str, sender, receiver, hex_msg = parts
            try:
                tick = int(tick_str)
                message = WireMessage.decode(bytes.fromhex(hex_msg))
            except (ValueError, WireError) as exc:
                raise TranscriptError(f"line {lineno}: {exc}") from None
            if sender not in ROLES or receiver not in ROLES:
                raise TranscriptError(f"line {lineno}: unknown party")
            transcript.add(tick, sender, receiver, message)
        return transcript

    @classmethod
    def load(cls, path: str | Path) -> "Transcript":
        return cls.from_text(Path(path).read_text())
