"""Command-line interface.

    fairex keygen  --profile {paper,toy} --seed HEX --out FILE
    fairex run     --protocol {common,linked,data-for-sig} --keys FILE
                   --seed HEX [--fault NAME_OR_FILE] [--transcript OUT]
    fairex audit   --transcript FILE --keys FILE
    fairex vectors --out DIR

Exit codes: 0 success / fair outcome, 1 unfair outcome detected,
2 usage error or unreadable input.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

from .errors import FairexError
from .harness import (
    SHIPPED_FAULT_SCRIPTS,
    FaultScript,
    audit,
    default_payload,
    run_session,
    shipped_script,
)
from .keys import PROFILES, BitProfile, generate_system_params, load_params, save_params
from .arith import Rng
from .protocol import Protocol, SessionConfig
from .vectors import generate_vectors
from .wire import Transcript

_PROTOCOLS = {p.value: p for p in Protocol}


def _parse_seed(text: str) -> bytes:
    try:
        raw = bytes.fromhex(text)
    except ValueError:
        raise FairexError(f"seed must be hex, got {text!r}") from None
    return raw if len(raw) == 32 else hashlib.sha256(raw).digest()


def _load_fault(spec: str) -> FaultScript:
    if spec in SHIPPED_FAULT_SCRIPTS:
        return shipped_script(spec)
    path = Path(spec)
    if not path.exists():
        raise FairexError(
            f"fault script {spec!r} is neither a shipped script "
            f"({', '.join(sorted(SHIPPED_FAULT_SCRIPTS))}) nor a file"
        )
    return FaultScript.load(path)


def _payload_from_args(args) -> bytes | tuple[bytes, bytes] | None:
    protocol = _PROTOCOLS[args.protocol]
    if protocol is Protocol.COMMON_MESSAGE and args.message is not None:
        return args.message.encode()
    if protocol is Protocol.LINKED_FILES and (args.file_a or args.file_b):
        if not (args.file_a and args.file_b):
            raise FairexError("linked protocol needs both --file-a and --file-b")
        return (Path(args.file_a).read_bytes(), Path(args.file_b).read_bytes())
    if protocol is Protocol.DATA_FOR_SIGNATURE and args.data is not None:
        return args.data.encode()
    return None


def _cmd_keygen(args) -> int:
    profile: BitProfile = PROFILES[args.profile]
    if args.safe_prime:
        profile = BitProfile(profile.name, profile.rsa_prime_bits, profile.elg_bits, safe_prime=True)
    params = generate_system_params(profile, Rng(_parse_seed(args.seed)))
    save_params(params, args.out)
    if args.public_out:
        save_params(params, args.public_out, public_only=True)
    print(f"wrote {args.out} (profile {profile.name})")
    return 0


def _report_lines(report) -> list[str]:
    return [
        f"fair outcome:        {'yes' if report.fair else 'NO'}",
        f"arbiter involved:    {'yes' if report.sttp_involved else 'no'}",
        f"arbiter saw V_A:     {'YES' if report.sttp_saw_va else 'no'}",
        f"A holds valid item:  {'yes' if report.a_acquired_valid else 'no'}",
        f"B holds valid item:  {'yes' if report.b_acquired_valid else 'no'}",
    ]


def _cmd_run(args) -> int:
    params = load_params(args.keys)
    protocol = _PROTOCOLS[args.protocol]
    payload = _payload_from_args(args)
    cfg = SessionConfig(
        protocol=protocol,
        params=params,
        payload=payload if payload is not None else default_payload(protocol),
        seed=_parse_seed(args.seed),
        timeout=args.timeout,
    )
    fault = _load_fault(args.fault)
    result = run_session(cfg, fault)
    if args.transcript:
        result.transcript.save(args.transcript)
    report = audit(result.transcript, params, protocol, cfg.payload)
    verdicts = ", ".join(f"{r}={result.states[r].verdict}" for r in ("A", "B"))
    print(f"run finished ({verdicts}){' [stalled]' if result.stalled else ''}")
    for line in _report_lines(report):
        print(line)
    return 0 if report.fair else 1


def _cmd_audit(args) -> int:
    params = load_params(args.keys)
    transcript = Transcript.load(args.transcript)
    protocol = _PROTOCOLS[args.protocol]
    payload = _payload_from_args(args)
    report = audit(
        transcript,
        params,
        protocol,
        payload if payload is not None else default_payload(protocol),
    )
    for line in _report_lines(report):
        print(line)
    return 0 if report.fair else 1


def _cmd_vectors(args) -> int:
    path = generate_vectors(args.out)
    print(f"wrote {path}")
    return 0


def _add_payload_args(sub) -> None:
    sub.add_argument("--protocol", choices=sorted(_PROTOCOLS), default="common")
    sub.add_argument("--message", help="message text (common protocol)")
    sub.add_argument("--file-a", help="path to A's file (linked protocol)")
    sub.add_argument("--file-b", help="path to B's file (linked protocol)")
    sub.add_argument("--data", help="data payload text (data-for-sig protocol)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairex", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    keygen = commands.add_parser("keygen", help="generate a parameter/key file")
    keygen.add_argument("--profile", choices=sorted(PROFILES), required=True)
    keygen.add_argument("--seed", required=True, help="hex seed")
    keygen.add_argument("--out", required=True)
    keygen.add_argument("--public-out", help="also write a private-free export")
    keygen.add_argument("--safe-prime", action="store_true", help="use safe ElGamal moduli")
    keygen.set_defaults(func=_cmd_keygen)

    run = commands.add_parser("run", help="simulate one exchange session")
    _add_payload_args(run)
    run.add_argument("--keys", required=True)
    run.add_argument("--seed", required=True, help="hex seed")
    run.add_argument("--fault", default="none", help="shipped script name or script file")
    run.add_argument("--transcript", help="write the transcript here")
    run.add_argument("--timeout", type=int, default=8, help="ticks before a waiting party gives up")
    run.set_defaults(func=_cmd_run)

    aud = commands.add_parser("audit", help="recompute fairness flags from a transcript")
    _add_payload_args(aud)
    aud.add_argument("--transcript", required=True)
    aud.add_argument("--keys", required=True)
    aud.set_defaults(func=_cmd_audit)

    vectors = commands.add_parser("vectors", help="emit deterministic certificate vectors")
    vectors.add_argument("--out", required=True)
    vectors.set_defaults(func=_cmd_vectors)
    return parser


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (FairexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())
