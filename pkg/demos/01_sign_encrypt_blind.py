"""
Primitives walkthrough
======================

Textbook RSA signing, ElGamal encryption, and the blind-decryption split
that lets a key holder help decrypt a ciphertext without learning the
plaintext.  Everything is driven from one fixed seed, so the numbers
printed here are the same on every run.
"""

from fairex import (
    Rng,
    blind_half,
    elg_decrypt,
    elg_encrypt,
    generate_system_params,
    message_rep,
    rsa_sign,
    rsa_verify,
    sample_range,
    unblind,
)

rng = Rng.from_material(b"demo 01")
params = generate_system_params("toy", rng)

# ---------------------------------------------------------------------------
# RSA: sign a byte string by hashing it below the modulus, then verify.
# ---------------------------------------------------------------------------
message = message_rep(b"pay the bearer 10 coins", params.a_rsa.n)
signature = rsa_sign(message, params.a_rsa)
print(f"modulus n_A      = {params.a_rsa.n:#x}")
print(f"representative   = {message.rep:#x}")
print(f"signature        = {signature.s:#x}")
print(f"verifies         = {rsa_verify(signature, message, params.a_rsa.pub)}")

flipped = message_rep(b"pay the bearer 99 coins", params.a_rsa.n)
print(f"other message    = {rsa_verify(signature, flipped, params.a_rsa.pub)}")

# ---------------------------------------------------------------------------
# ElGamal: encrypt the signature under the arbiter's key and decrypt it.
# ---------------------------------------------------------------------------
group = params.sttp_elg.pub  # (P, G, PK)
nonce = sample_range(1, group[0] - 1, rng)
ct = elg_encrypt(signature.s, group, nonce)
print(f"\nciphertext       = (W={ct.W:#x}, V={ct.V:#x})")
print(f"decrypts back    = {elg_decrypt(ct, params.sttp_elg) == signature.s}")

# ---------------------------------------------------------------------------
# Blind split: hand the key holder only W.  It returns W^SK; whoever holds
# V finishes the decryption, and the key holder never sees the plaintext.
# ---------------------------------------------------------------------------
half = blind_half(ct.W, params.sttp_elg)
recovered = unblind(ct.V, half, group[0])
print(f"\nblind half       = {half.value:#x}   (computed from W alone)")
print(f"unblinded value  = {recovered:#x}")
print(f"matches original = {recovered == signature.s}")
