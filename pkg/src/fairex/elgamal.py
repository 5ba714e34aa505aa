"""ElGamal encryption with the decryption split needed for blind recovery.

The key holder can be handed only W and return W^SK; whoever holds V then
finishes the decryption with m = V * (W^SK)^-1 mod P.  The key holder
never sees V, so it learns nothing about the plaintext.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import mod_exp, mod_inv
from .errors import EmbeddingError, NotInvertibleError, ParameterError
from .keys import ElgKeyPair


@dataclass(frozen=True)
class ElgCiphertext:
    W: int
    V: int
    under: str = ""  # owner of the key this was encrypted to


@dataclass(frozen=True)
class BlindHalf:
    """W^SK mod P, computed by the key holder from W alone."""

    value: int


def elg_encrypt(m: int, pub: tuple[int, int, int], w: int) -> ElgCiphertext:
    """(W, V) = (G^w mod P, m * PK^w mod P) for plaintext m in (0, P)."""
    P, G, PK = pub
    if not 0 < m < P:
        raise EmbeddingError(f"plaintext must be in (0, {P}), got {m}")
    if not 1 <= w <= P - 2:
        raise ParameterError(f"nonce must be in [1, {P - 2}]")
    return ElgCiphertext(W=mod_exp(G, w, P), V=m * mod_exp(PK, w, P) % P)


def elg_decrypt(ct: ElgCiphertext, key: ElgKeyPair) -> int:
    """m = V * (W^SK)^-1 mod P."""
    if key.SK is None:
        raise ParameterError("decryption requires the private exponent")
    if ct.under and key.owner and ct.under != key.owner:
        raise ParameterError(f"ciphertext for {ct.under!r}, key owned by {key.owner!r}")
    half = mod_exp(ct.W, key.SK, key.P)
    try:
        return ct.V * mod_inv(half, key.P) % key.P
    except NotInvertibleError as exc:
        raise EmbeddingError("malformed ciphertext: W^SK not invertible") from exc


def blind_half(W: int, key: ElgKeyPair) -> BlindHalf:
    """The key holder's share of a decryption.  Takes only W, never V."""
    if key.SK is None:
        raise ParameterError("blind decryption requires the private exponent")
    if not 0 < W < key.P:
        raise ParameterError(f"W must be in (0, {key.P})")
    return BlindHalf(value=mod_exp(W, key.SK, key.P))


def unblind(V: int, half: BlindHalf, P: int) -> int:
    """Finish a blind decryption: V * half^-1 mod P."""
    try:
        return V * mod_inv(half.value, P) % P
    except NotInvertibleError as exc:
        raise EmbeddingError("malformed blind half: not invertible") from exc
