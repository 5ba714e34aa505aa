import pytest

from fairex.errors import TranscriptError, WireError
from fairex.wire import ARITY, MsgType, Transcript, WireMessage

SID = bytes(range(16))


def offer(fields=(b"\x0a", b"\x0e", b"\x01\x02", b"")) -> WireMessage:
    return WireMessage(msg_type=MsgType.CEMBS_OFFER, session_id=SID, fields=tuple(fields))


class TestWireMessage:
    def test_round_trip_every_type(self):
        for msg_type, arity in ARITY.items():
            fields = tuple(bytes([i]) * i for i in range(arity))
            msg = WireMessage(msg_type=msg_type, session_id=SID, fields=fields)
            assert WireMessage.decode(msg.encode()) == msg

    def test_layout(self):
        msg = WireMessage(msg_type=MsgType.FINAL_SIGNATURE, session_id=SID, fields=(b"\x12",))
        assert msg.encode() == bytes([3]) + SID + bytes([1]) + b"\x00\x00\x00\x01" + b"\x12"

    def test_empty_field_encodes_zero(self):
        decoded = WireMessage.decode(offer().encode())
        assert decoded.fields[3] == b""

    def test_wrong_arity_rejected(self):
        with pytest.raises(WireError):
            WireMessage(msg_type=MsgType.FINAL_SIGNATURE, session_id=SID, fields=(b"a", b"b"))

    def test_bad_session_id_rejected(self):
        with pytest.raises(WireError):
            WireMessage(msg_type=MsgType.FINAL_SIGNATURE, session_id=b"short", fields=(b"a",))

    def test_decode_rejects_garbage(self):
        encoded = offer().encode()
        for broken in (b"", encoded[:-1], encoded + b"\x00", b"\xff" + encoded[1:]):
            with pytest.raises(WireError):
                WireMessage.decode(broken)

    def test_wire_names(self):
        assert MsgType.CEMBS_OFFER.wire_name == "cembs-offer"
        assert MsgType.from_wire_name("recovery-request") is MsgType.RECOVERY_REQUEST
        with pytest.raises(WireError):
            MsgType.from_wire_name("telegram")


class TestTranscript:
    def make(self) -> Transcript:
        t = Transcript()
        t.add(1, "A", "B", offer())
        t.add(2, "B", "A", WireMessage(MsgType.COUNTER_SIGNATURE, SID, (b"\x07",)))
        return t

    def test_file_round_trip(self, tmp_path):
        t = self.make()
        path = tmp_path / "transcript.txt"
        t.save(path)
        loaded = Transcript.load(path)
        assert loaded.records == t.records

    def test_file_format(self, tmp_path):
        t = self.make()
        line = t.to_text().splitlines()[0]
        tick, sender, receiver, payload = line.split("\t")
        assert (tick, sender, receiver) == ("1", "A", "B")
        assert bytes.fromhex(payload) == offer().encode()

    def test_truncated_line_rejected(self):
        text = self.make().to_text()
        with pytest.raises(TranscriptError):
            Transcript.from_text(text[:-3])

    def test_wrong_column_count_rejected(self):
        with pytest.raises(TranscriptError):
            Transcript.from_text("1\tA\tB\n")

    def test_unknown_party_rejected(self):
        payload = offer().encode().hex()
        with pytest.raises(TranscriptError):
            Transcript.from_text(f"1\tA\tEVE\t{payload}\n")

    def test_notes_not_serialized(self, tmp_path):
        t = self.make()
        t.note("B: out-of-phase message")
        path = tmp_path / "transcript.txt"
        t.save(path)
        assert Transcript.load(path).notes == []
