"""Key material and public parameters for Client A, Client B, and the STTP.

Client A holds an RSA signing pair, an ElGamal pair, and the commitment
base g in Z_{n_A}^*; Client B holds an RSA pair; the STTP holds an
ElGamal pair.  Both ElGamal moduli are generated strictly above the RSA
modulus whose signatures they must carry (n_A < P_T and n_B < P_A), so
a signature always embeds injectively as a plaintext.

Two named size profiles ship: "paper" (512-bit RSA primes, 1024-bit
ElGamal moduli) and "toy" (8-bit primes, 24-bit moduli) for exhaustive
desk-scale tests.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import gcd, isqrt
from pathlib import Path

from .arith import (
    Rng,
    int_to_bytes,
    is_probable_prime,
    mod_exp,
    sample_range,
    small_primes_to_100k,
)
from .errors import ParameterError, SetupError

# Candidates tried before a generation step is declared failed.
_MAX_RETRIES = 100_000


@dataclass(frozen=True)
class RsaKeyPair:
    """RSA signing identity.  Private fields are None in public exports."""

    n: int
    e: int
    d: int | None = None
    p: int | None = None
    q: int | None = None
    owner: str = ""

    def public(self) -> "RsaKeyPair":
        return replace(self, d=None, p=None, q=None)

    @property
    def pub(self) -> tuple[int, int]:
        return (self.n, self.e)


@dataclass(frozen=True)
class ElgKeyPair:
    """ElGamal identity: prime modulus P, base G, PK = G^SK mod P."""

    P: int
    G: int
    PK: int
    SK: int | None = None
    owner: str = ""

    def public(self) -> "ElgKeyPair":
        return replace(self, SK=None)

    @property
    def pub(self) -> tuple[int, int, int]:
        return (self.P, self.G, self.PK)


@dataclass(frozen=True)
class CommitBase:
    """Base g of the blinded commitment g^V, living in Z_{n_ref}^*.

    n_ref = p*q is composite, so the unit group is not cyclic and g has
    some unknown (large, with overwhelming probability) order; g is
    sampled uniformly from the units with {1, n_ref - 1} excluded.
    """

    g: int
    n_ref: int


@dataclass(frozen=True)
class BitProfile:
    name: str
    rsa_prime_bits: int
    elg_bits: int
    safe_prime: bool = False

    def __post_init__(self):
        if self.rsa_prime_bits < 8:
            raise ParameterError("RSA primes must be at least 8 bits")
        if self.elg_bits < 2 * self.rsa_prime_bits:
            raise ParameterError("ElGamal modulus must cover the RSA modulus size")


PROFILES: dict[str, BitProfile] = {
    "paper": BitProfile("paper", rsa_prime_bits=512, elg_bits=1024),
    "toy": BitProfile("toy", rsa_prime_bits=8, elg_bits=24),
}


@dataclass(frozen=True)
class SystemParams:
    a_rsa: RsaKeyPair
    b_rsa: RsaKeyPair
    a_elg: ElgKeyPair
    sttp_elg: ElgKeyPair
    commit_base: CommitBase
    bit_profile: BitProfile | None = None

    def public(self) -> "SystemParams":
        return SystemParams(
            a_rsa=self.a_rsa.public(),
            b_rsa=self.b_rsa.public(),
            a_elg=self.a_elg.public(),
            sttp_elg=self.sttp_elg.public(),
            commit_base=self.commit_base,
            bit_profile=self.bit_profile,
        )


def _gen_prime_exact(bits: int, rng: Rng, floor: int = 0) -> int:
    """Probable prime of exactly `bits` bits, strictly above `floor`."""
    lo = max(1 << (bits - 1), floor + 1)
    hi = 1 << bits
    if lo >= hi:
        raise SetupError(f"no {bits}-bit integers above {floor}")
    for _ in range(_MAX_RETRIES):
        candidate = sample_range(lo, hi, rng) | 1
        if candidate >= hi:
            continue
        if is_probable_prime(candidate, rng):
            return candidate
    raise SetupError(f"no {bits}-bit prime above {floor} found after bounded retries")


def _gen_safe_prime(bits: int, rng: Rng, floor: int = 0) -> int:
    """P = 2q + 1 with both P and q probable primes, P of exactly `bits` bits."""
    for _ in range(_MAX_RETRIES):
        q = _gen_prime_exact(bits - 1, rng)
        P = 2 * q + 1
        if P.bit_length() != bits or P <= floor:
            continue
        if is_probable_prime(P, rng):
            return P
    raise SetupError(f"no {bits}-bit safe prime above {floor} found after bounded retries")


def _small_prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n found by trial division up to 10^5."""
    found = []
    for p in small_primes_to_100k():
        if n % p == 0:
            found.append(p)
            while n % p == 0:
                n //= p
            if n == 1:
                break
    return found


def _base_has_large_order(G: int, P: int, small_factors: list[int]) -> bool:
    """G^((P-1)/f) != 1 for every small prime factor f of P-1."""
    return all(mod_exp(G, (P - 1) // f, P) != 1 for f in small_factors)


def _gen_elg(profile: BitProfile, rng: Rng, owner: str, floor: int = 0) -> ElgKeyPair:
    if profile.safe_prime:
        P = _gen_safe_prime(profile.elg_bits, rng, floor=floor)
    else:
        P = _gen_prime_exact(profile.elg_bits, rng, floor=floor)
    small_factors = _small_prime_factors(P - 1)
    for _ in range(_MAX_RETRIES):
        G = sample_range(2, P - 1, rng)  # excludes 1 and P-1
        if _base_has_large_order(G, P, small_factors):
            break
    else:
        raise SetupError("no base of large order found after bounded retries")
    SK = sample_range(1, P - 1, rng)  # [1, P-2]
    return ElgKeyPair(P=P, G=G, PK=mod_exp(G, SK, P), SK=SK, owner=owner)


def _gen_rsa(profile: BitProfile, rng: Rng, owner: str) -> RsaKeyPair:
    bits = profile.rsa_prime_bits
    # Keep both primes above sqrt(2^(2*bits - 1)) so n = p*q has exactly
    # twice as many bits as each prime.
    floor = isqrt(1 << (2 * bits - 1))
    if floor * floor < 1 << (2 * bits - 1):
        floor += 1
    p = _gen_prime_exact(bits, rng, floor=floor - 1)
    for _ in range(_MAX_RETRIES):
        q = _gen_prime_exact(bits, rng, floor=floor - 1)
        if q != p:
            break
    else:
        raise SetupError("could not find a second distinct prime")
    n = p * q
    phi = (p - 1) * (q - 1)
    for _ in range(_MAX_RETRIES):
        e = sample_range(2, phi, rng)
        if gcd(e, phi) == 1:
            break
    else:
        raise SetupError("no public exponent coprime to phi(n) found")
    d = pow(e, -1, phi)
    return RsaKeyPair(n=n, e=e, d=d, p=p, q=q, owner=owner)


def _gen_commit_base(n: int, rng: Rng) -> CommitBase:
    for _ in range(_MAX_RETRIES):
        g = sample_range(2, n - 1, rng)  # excludes 1 and n-1
        if gcd(g, n) == 1:
            return CommitBase(g=g, n_ref=n)
    raise SetupError("no commitment base found after bounded retries")


def init_client_a(
    profile: BitProfile, rng: Rng, p_floor: int = 0
) -> tuple[RsaKeyPair, ElgKeyPair, CommitBase]:
    """Client A's full material: RSA pair, ElGamal pair, commitment base.

    P_A is generated strictly above max(n_A, p_floor); pass B's modulus
    as p_floor so B's signatures embed under A's ElGamal key.
    """
    rsa = _gen_rsa(profile, rng, owner="A")
    elg = _gen_elg(profile, rng, owner="A", floor=max(rsa.n, p_floor))
    base = _gen_commit_base(rsa.n, rng)
    return rsa, elg, base


def init_client_b(profile: BitProfile, rng: Rng) -> RsaKeyPair:
    """Client B's RSA signing pair."""
    return _gen_rsa(profile, rng, owner="B")


def init_sttp(profile: BitProfile, rng: Rng, p_floor: int = 0) -> ElgKeyPair:
    """The STTP's ElGamal pair; P_T strictly above p_floor (A's modulus)."""
    return _gen_elg(profile, rng, owner="STTP", floor=p_floor)


def generate_system_params(profile: BitProfile | str, rng: Rng) -> SystemParams:
    """Run all three initializations with the cross-party size constraints.

    Per-party child streams keep each party's keys independent of how
    many samples the others consumed, so identical seeds give identical
    parameter sets run after run.
    """
    if isinstance(profile, str):
        try:
            profile = PROFILES[profile]
        except KeyError:
            raise ParameterError(f"unknown profile {profile!r}") from None
    rng_a, rng_b, rng_t = rng.child(b"client-a"), rng.child(b"client-b"), rng.child(b"sttp")
    b_rsa = init_client_b(profile, rng_b)
    a_rsa, a_elg, base = init_client_a(profile, rng_a, p_floor=b_rsa.n)
    sttp_elg = init_sttp(profile, rng_t, p_floor=a_rsa.n)
    params = SystemParams(
        a_rsa=a_rsa,
        b_rsa=b_rsa,
        a_elg=a_elg,
        sttp_elg=sttp_elg,
        commit_base=base,
        bit_profile=profile,
    )
    violations = validate_params(params)
    if violations:
        raise SetupError(f"generated parameters invalid: {violations}")
    return params


def _check_rsa(key: RsaKeyPair, who: str, out: list[str]) -> None:
    if key.p is not None and key.q is not None:
        if key.p == key.q:
            out.append(f"{who}: rsa primes equal")
        if not is_probable_prime(key.p) or not is_probable_prime(key.q):
            out.append(f"{who}: rsa factor not prime")
        if key.n != key.p * key.q:
            out.append(f"{who}: rsa modulus mismatch")
        phi = (key.p - 1) * (key.q - 1)
        if not 1 < key.e < phi or gcd(key.e, phi) != 1:
            out.append(f"{who}: rsa public exponent invalid")
        elif key.d is not None and key.e * key.d % phi != 1:
            out.append(f"{who}: rsa exponents not inverse")
    elif key.n < 4 or key.e < 2:
        out.append(f"{who}: rsa public key out of range")


def _check_elg(key: ElgKeyPair, who: str, out: list[str]) -> None:
    if not is_probable_prime(key.P):
        out.append(f"{who}: modulus not prime")
    if not 1 < key.G < key.P:
        out.append(f"{who}: base out of range")
    if key.SK is not None:
        if not 1 <= key.SK <= key.P - 2:
            out.append(f"{who}: secret exponent out of range")
        if mod_exp(key.G, key.SK, key.P) != key.PK:
            out.append(f"{who}: key consistency (PK != G^SK mod P)")
    if not 0 < key.PK < key.P:
        out.append(f"{who}: public element out of range")


def validate_params(sp: SystemParams) -> list[str]:
    """Every violated invariant as a human-readable string; empty iff valid.

    Checks that need private material are skipped when it is absent, so
    public exports validate too.
    """
    out: list[str] = []
    _check_rsa(sp.a_rsa, "client A", out)
    _check_rsa(sp.b_rsa, "client B", out)
    _check_elg(sp.a_elg, "client A", out)
    _check_elg(sp.sttp_elg, "STTP", out)
    base = sp.commit_base
    if base.n_ref != sp.a_rsa.n:
        out.append("commit base: wrong modulus")
    if gcd(base.g, base.n_ref) != 1 or base.g in (1, base.n_ref - 1) or not 0 < base.g < base.n_ref:
        out.append("commit base: invalid element")
    if sp.a_rsa.n >= sp.sttp_elg.P:
        out.append("plaintext embedding (n_A >= P_T)")
    if sp.b_rsa.n >= sp.a_elg.P:
        out.append("plaintext embedding (n_B >= P_A)")
    return out


# --- key files: one `field=hex` record per line, grouped by role ----------

_ROLE_FIELDS = {
    "A": ("n", "e", "d", "p", "q", "P", "G", "SK", "PK", "g"),
    "B": ("n", "e", "d", "p", "q"),
    "STTP": ("P", "G", "SK", "PK"),
}
_PRIVATE_FIELDS = {"d", "p", "q", "SK"}


def _hex(x: int) -> str:
    return int_to_bytes(x).hex() or "00"


def save_params(sp: SystemParams, path: str | Path, public_only: bool = False) -> None:
    """Write a key file: `role=A|B|STTP` opens a record, `field=hex` lines follow.

    public_only omits d, p, q, SK.
    """
    values = {
        "A": {
            "n": sp.a_rsa.n, "e": sp.a_rsa.e, "d": sp.a_rsa.d, "p": sp.a_rsa.p, "q": sp.a_rsa.q,
            "P": sp.a_elg.P, "G": sp.a_elg.G, "SK": sp.a_elg.SK, "PK": sp.a_elg.PK,
            "g": sp.commit_base.g,
        },
        "B": {"n": sp.b_rsa.n, "e": sp.b_rsa.e, "d": sp.b_rsa.d, "p": sp.b_rsa.p, "q": sp.b_rsa.q},
        "STTP": {
            "P": sp.sttp_elg.P, "G": sp.sttp_elg.G, "SK": sp.sttp_elg.SK, "PK": sp.sttp_elg.PK,
        },
    }
    lines = []
    for role, fields in _ROLE_FIELDS.items():
        lines.append(f"role={role}")
        for name in fields:
            value = values[role][name]
            if value is None or (public_only and name in _PRIVATE_FIELDS):
                continue
            lines.append(f"{name}={_hex(value)}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_params(path: str | Path) -> SystemParams:
    """Parse a key file written by save_params.  Missing private fields load as None."""
    records: dict[str, dict[str, int]] = {}
    current: dict[str, int] | None = None
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected field=value")
        name, _, value = line.partition("=")
        if name == "role":
            if value not in _ROLE_FIELDS:
                raise ParameterError(f"{path}:{lineno}: unknown role {value!r}")
            current = records.setdefault(value, {})
            continue
        if current is None:
            raise ParameterError(f"{path}:{lineno}: field before any role line")
        try:
            current[name] = int(value, 16)
        except ValueError:
            raise ParameterError(f"{path}:{lineno}: bad hex value") from None
    missing = set(_ROLE_FIELDS) - set(records)
    if missing:
        raise ParameterError(f"{path}: missing roles {sorted(missing)}")
    a, b, t = records["A"], records["B"], records["STTP"]
    try:
        return SystemParams(
            a_rsa=RsaKeyPair(n=a["n"], e=a["e"], d=a.get("d"), p=a.get("p"), q=a.get("q"), owner="A"),
            b_rsa=RsaKeyPair(n=b["n"], e=b["e"], d=b.get("d"), p=b.get("p"), q=b.get("q"), owner="B"),
            a_elg=ElgKeyPair(P=a["P"], G=a["G"], PK=a["PK"], SK=a.get("SK"), owner="A"),
            sttp_elg=ElgKeyPair(P=t["P"], G=t["G"], PK=t["PK"], SK=t.get("SK"), owner="STTP"),
            commit_base=CommitBase(g=a["g"], n_ref=a["n"]),
        )
    except KeyError as exc:
        raise ParameterError(f"{path}: missing field {exc}") from None
