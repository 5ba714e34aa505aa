"""
Certified encrypted signatures
==============================

A signature is encrypted under the arbiter's key, and a certificate
(r, c) is attached.  Anyone can check the certificate against the
ciphertext half W and the commitment C = g^V -- without ever seeing V,
and therefore without being able to decrypt.  That is exactly the
position the arbiter is kept in.
"""

from dataclasses import replace

from fairex import (
    CembsContext,
    Rng,
    blind_commit,
    cembs_generate,
    cembs_verify,
    encrypt_and_certify,
    generate_system_params,
    message_rep,
    rsa_sign,
    rsa_verify,
    sample_nonces,
)

rng = Rng.from_material(b"demo 02")
params = generate_system_params("toy", rng)
ctx = CembsContext.a_side(params)

message = message_rep(b"the agreed contract", params.a_rsa.n)
signature = rsa_sign(message, params.a_rsa)
nonces = sample_nonces(params.sttp_elg.P, rng)
ct, cert = cembs_generate(signature, ctx, nonces)
commitment = blind_commit(ct.V, params.commit_base)

print(f"ciphertext  W={ct.W:#x}  V={ct.V:#x}")
print(f"commitment  C={commitment.C:#x}")
print(f"certificate c={cert.c:#x}")
print(f"            r={cert.r:#x}")

# The verifier's whole view is (W, C, r, c) plus public parameters.
print(f"\nverifies blindly       = {cembs_verify(ct.W, commitment, cert, ctx)}")

# Any tampering breaks it: here the response is nudged by one.
bad = replace(cert, r=(cert.r + 1) % (params.sttp_elg.P - 1))
print(f"tampered r             = {cembs_verify(ct.W, commitment, bad, ctx)}")

# ... and a commitment to the wrong V does too.
wrong_c = blind_commit(ct.V + 1, params.commit_base)
print(f"commitment to wrong V  = {cembs_verify(ct.W, wrong_c, cert, ctx)}")

# Caveat (see README, Limitations): the certificate binds (W, C) but not
# the claim "the plaintext is a signature on m".  Encrypting garbage
# still certifies.
garbage = 31337 % params.sttp_elg.P
assert not rsa_verify(garbage, message, params.a_rsa.pub)
g_ct, g_cert = encrypt_and_certify(garbage, ctx, sample_nonces(params.sttp_elg.P, rng))
g_commit = blind_commit(g_ct.V, params.commit_base)
print(f"garbage plaintext      = {cembs_verify(g_ct.W, g_commit, g_cert, ctx)}  (known limitation)")
