// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "pnpchain/bits.hpp"
#include "pnpchain/jash/meta.hpp"
#include "pnpchain/sha256.hpp"

namespace pnpchain {

enum class ArtifactKind { jash_source, meta, data, result_set };

const char* kind_name(ArtifactKind kind) noexcept;

/// Raw data bundle with its checksum and size `d` in bytes.
struct DataBundle {
    Bytes bytes;
    Digest sha256;
    std::uint64_t d = 0;

    static DataBundle of(Bytes content);
};

struct StoredArtifact {
    Digest id;
    ArtifactKind kind;
    Bytes payload;
};

/// Simulated fileshare: content-addressed, append-only, every read re-verified.
///
/// With a directory the payloads live at `<dir>/<first2hex>/<fullhex>` and a
/// `catalog.json` alongside keeps artifact kinds, the submission record of each
/// jash id, the review queue and the aggregated result set of each jash id.
class ArtifactStore {
public:
    ArtifactStore() = default;
    explicit ArtifactStore(std::filesystem::path dir);

    ArtifactStore(const ArtifactStore&) = delete;
    ArtifactStore& operator=(const ArtifactStore&) = delete;

    /// Idempotent; returns SHA-256(payload). Throws EmptyPayload.
    Digest put(ByteView payload, ArtifactKind kind);
    Digest put(std::string_view text, ArtifactKind kind);

    /// Throws NotFound, or ChecksumMismatch if the stored bytes no longer hash to `id`.
    Bytes get(const Digest& id) const;
    std::string get_text(const Digest& id) const;
    StoredArtifact get_artifact(const Digest& id) const;

    bool contains(const Digest& id) const;
    std::size_t size() const;
    std::optional<ArtifactKind> kind(const Digest& id) const;

    /// Record value(arg) of a linear-record bundle: exactly data_record_size bytes.
    /// Throws ChecksumMismatch if the bundle digest differs from meta.data_sha256,
    /// WindowOutOfRange if the record lies past the end of the bundle.
    Bytes get_window(const Digest& data_id, const Bits& arg, const JashMeta& meta) const;

    // Catalog: named references into the store.
    void bind_jash(const std::string& jash_id, const Digest& record_id);
    std::optional<Digest> jash_record(const std::string& jash_id) const;
    void bind_result_set(const std::string& jash_id, const Digest& result_set_id);
    std::optional<Digest> result_set(const std::string& jash_id) const;
    std::vector<Digest> queue() const;
    void set_queue(std::vector<Digest> queue);

    /// Writes catalog.json (directory-backed stores only).
    void flush() const;

    /// Flips one bit of a stored payload in place, bypassing immutability. Test hook.
    void corrupt_for_testing(const Digest& id, std::size_t bit);

    const std::optional<std::filesystem::path>& directory() const noexcept { return dir_; }

private:
    std::filesystem::path path_for(const Digest& id) const;
    Bytes load_unverified(const Digest& id) const;
    void flush_locked() const;

    mutable std::shared_mutex mutex_;
    std::optional<std::filesystem::path> dir_;
    mutable std::map<Digest, Bytes> payloads_;
    std::map<Digest, ArtifactKind> kinds_;
    std::map<std::string, Digest> jash_records_;
    std::map<std::string, Digest> result_sets_;
    std::vector<Digest> queue_;
};

}  // namespace pnpchain
