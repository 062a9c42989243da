// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "pnpchain/artifact_store.hpp"
#include "pnpchain/jash/classic.hpp"
#include "pnpchain/jash/interpreter.hpp"
#include "pnpchain/jash/meta.hpp"

namespace pnpchain {

/// What a researcher files with the RA. Canonical JSON:
/// {"data_id"?, "importance", "meta", "source_id", "veto"}.
struct SubmissionRecord {
    Digest source_id;
    JashMeta meta;
    std::optional<Digest> data_id;
    double importance = 0.0;
    bool veto = false;

    nlohmann::json to_json() const;
    static SubmissionRecord from_json(const nlohmann::json& j);
    std::string canonical() const { return to_json().dump(); }
};

/// A published computation: an interpreted jash with its data bundle, or the
/// builtin classic SHA-256 problem. Owns its data so windows stay valid.
class Job {
public:
    static Job program(jash::BoundedJash jash, Bytes data = {});
    static Job classic(jash::ClassicJash jash);

    const JashMeta& meta() const noexcept;
    bool is_classic() const noexcept { return std::holds_alternative<jash::ClassicJash>(impl_); }
    const jash::ClassicJash& classic_jash() const { return std::get<jash::ClassicJash>(impl_); }
    std::uint64_t worst_case_steps() const noexcept;

    /// Checks the arg against the meta, then executes.
    jash::ExecResult run(const Bits& arg) const;

private:
    explicit Job(std::variant<jash::BoundedJash, jash::ClassicJash> impl, Bytes data)
        : impl_(std::move(impl)), data_(std::move(data)) {}

    std::variant<jash::BoundedJash, jash::ClassicJash> impl_;
    Bytes data_;
};

/// Rebuilds the job filed under `jash_id`: record, source and bundle all fetched
/// through checksum-verified reads. Throws NotFound, ChecksumMismatch, NotValidated.
Job load_job(const ArtifactStore& store, const std::string& jash_id);

/// Loads a job straight from its submission record.
Job load_job(const ArtifactStore& store, const SubmissionRecord& record);

}  // namespace pnpchain
