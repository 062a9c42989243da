// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/sha256.hpp"

#include <openssl/evp.h>

#include "pnpchain/error.hpp"

namespace pnpchain {

Digest Digest::from_hex(std::string_view hex) {
    const Bytes raw = pnpchain::from_hex(hex);
    if (raw.size() != 32) throw Error(Errc::decode, "digest must be 32 bytes");
    Digest d;
    std::copy(raw.begin(), raw.end(), d.bytes.begin());
    return d;
}

Digest sha256(ByteView data) {
    thread_local Sha256 hasher;
    return hasher.update(data).finish();
}

Digest sha256(std::string_view text) {
    return sha256(ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

namespace {

// Explicitly fetched once; implicit fetching on every init dominates short hashes.
const EVP_MD* sha256_md() {
    static EVP_MD* const md = EVP_MD_fetch(nullptr, "SHA256", nullptr);
    return md;
}

}  // namespace

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || sha256_md() == nullptr ||
        EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), sha256_md(), nullptr) != 1) {
        throw std::runtime_error("EVP sha256 init failed");
    }
}

Sha256::~Sha256() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

Sha256& Sha256::update(ByteView data) {
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size());
    return *this;
}

Sha256& Sha256::update(std::string_view text) {
    EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), text.data(), text.size());
    return *this;
}

Digest Sha256::finish() {
    Digest d;
    unsigned int len = 0;
    auto* ctx = static_cast<EVP_MD_CTX*>(ctx_);
    EVP_DigestFinal_ex(ctx, d.bytes.data(), &len);
    EVP_DigestInit_ex(ctx, sha256_md(), nullptr);  // ready for reuse
    return d;
}

}  // namespace pnpchain
