// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/job.hpp"

#include "pnpchain/error.hpp"
#include "pnpchain/jash/parser.hpp"

namespace pnpchain {

nlohmann::json SubmissionRecord::to_json() const {
    nlohmann::json j;
    j["source_id"] = source_id.hex();
    j["meta"] = meta.to_json();
    if (data_id) j["data_id"] = data_id->hex();
    j["importance"] = importance;
    j["veto"] = veto;
    return j;
}

SubmissionRecord SubmissionRecord::from_json(const nlohmann::json& j) {
    try {
        SubmissionRecord r;
        r.source_id = Digest::from_hex(j.at("source_id").get<std::string>());
        r.meta = JashMeta::from_json(j.at("meta"));
        if (j.contains("data_id")) r.data_id = Digest::from_hex(j.at("data_id").get<std::string>());
        r.importance = j.at("importance").get<double>();
        r.veto = j.at("veto").get<bool>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::decode, std::string("bad submission record: ") + e.what());
    }
}

Job Job::program(jash::BoundedJash jash, Bytes data) { return Job(std::move(jash), std::move(data)); }

Job Job::classic(jash::ClassicJash jash) { return Job(std::move(jash), {}); }

const JashMeta& Job::meta() const noexcept {
    return std::visit([](const auto& j) -> const JashMeta& { return j.meta(); }, impl_);
}

std::uint64_t Job::worst_case_steps() const noexcept {
    return std::visit([](const auto& j) { return j.bound().worst_case_steps; }, impl_);
}

jash::ExecResult Job::run(const Bits& arg) const {
    meta().check_arg(arg);
    if (const auto* c = std::get_if<jash::ClassicJash>(&impl_)) return c->run(arg);
    const auto& program = std::get<jash::BoundedJash>(impl_);
    const jash::BundleWindows windows(data_, program.meta().data_record_size);
    return program.run(arg, windows);
}

Job load_job(const ArtifactStore& store, const SubmissionRecord& record) {
    jash::JashProgram prog = jash::parse(store.get_text(record.source_id));
    Bytes data;
    const auto data_id = record.data_id ? record.data_id : record.meta.data_sha256;
    if (data_id) {
        if (record.meta.data_sha256 && *record.meta.data_sha256 != *data_id) {
            throw Error(Errc::checksum_mismatch, "data bundle does not match meta checksum");
        }
        data = store.get(*data_id);
    }
    return Job::program(jash::BoundedJash(std::move(prog), record.meta), std::move(data));
}

Job load_job(const ArtifactStore& store, const std::string& jash_id) {
    const auto record_id = store.jash_record(jash_id);
    if (!record_id) throw Error(Errc::not_found, "no submission record for jash '" + jash_id + "'");
    const auto text = store.get_text(*record_id);
    const auto json = nlohmann::json::parse(text, nullptr, false);
    if (json.is_discarded()) throw Error(Errc::decode, "submission record of '" + jash_id + "' is not JSON");
    const auto record = SubmissionRecord::from_json(json);
    if (record.meta.jash_id != jash_id) {
        throw Error(Errc::decode, "record filed under '" + jash_id + "' names '" + record.meta.jash_id + "'");
    }
    return load_job(store, record);
}

}  // namespace pnpchain
