// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/artifact_store.hpp"

#include <fstream>
#include <iterator>
#include <mutex>

#include <json.hpp>

#include "pnpchain/error.hpp"

namespace pnpchain {

namespace fs = std::filesystem;

const char* kind_name(ArtifactKind kind) noexcept {
    switch (kind) {
        case ArtifactKind::jash_source: return "jash_source";
        case ArtifactKind::meta: return "meta";
        case ArtifactKind::data: return "data";
        case ArtifactKind::result_set: return "result_set";
    }
    return "unknown";
}

namespace {

ArtifactKind kind_from_name(const std::string& name) {
    for (const auto k : {ArtifactKind::jash_source, ArtifactKind::meta, ArtifactKind::data,
                         ArtifactKind::result_set}) {
        if (name == kind_name(k)) return k;
    }
    throw Error(Errc::decode, "unknown artifact kind '" + name + "'");
}

Bytes read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot read " + path.string());
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, ByteView bytes) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::io, "cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
    fs::rename(tmp, path);
}

}  // namespace

DataBundle DataBundle::of(Bytes content) {
    DataBundle b;
    b.sha256 = pnpchain::sha256(content);
    b.d = content.size();
    b.bytes = std::move(content);
    return b;
}

ArtifactStore::ArtifactStore(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(*dir_);
    const fs::path catalog = *dir_ / "catalog.json";
    if (!fs::exists(catalog)) return;
    const Bytes raw = read_file(catalog);
    const auto j = nlohmann::json::parse(raw.begin(), raw.end());
    for (const auto& [hex, kind] : j.at("artifacts").items()) {
        kinds_[Digest::from_hex(hex)] = kind_from_name(kind.get<std::string>());
    }
    for (const auto& [id, hex] : j.at("jash").items()) jash_records_[id] = Digest::from_hex(hex.get<std::string>());
    for (const auto& [id, hex] : j.at("results").items()) result_sets_[id] = Digest::from_hex(hex.get<std::string>());
    for (const auto& hex : j.at("queue")) queue_.push_back(Digest::from_hex(hex.get<std::string>()));
}

fs::path ArtifactStore::path_for(const Digest& id) const {
    const std::string hex = id.hex();
    return *dir_ / hex.substr(0, 2) / hex;
}

Digest ArtifactStore::put(ByteView payload, ArtifactKind kind) {
    if (payload.empty()) throw Error(Errc::empty_payload, "cannot store an empty payload");
    const Digest id = sha256(payload);
    std::unique_lock lock(mutex_);
    if (kinds_.contains(id)) return id;
    kinds_[id] = kind;
    payloads_[id] = Bytes(payload.begin(), payload.end());
    if (dir_) {
        write_file(path_for(id), payload);
        flush_locked();
    }
    return id;
}

Digest ArtifactStore::put(std::string_view text, ArtifactKind kind) {
    return put(ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()), kind);
}

Bytes ArtifactStore::load_unverified(const Digest& id) const {
    if (auto it = payloads_.find(id); it != payloads_.end()) return it->second;
    if (!kinds_.contains(id) || !dir_) throw Error(Errc::not_found, "artifact " + id.hex() + " not found");
    const fs::path path = path_for(id);
    if (!fs::exists(path)) throw Error(Errc::not_found, "artifact file " + path.string() + " missing");
    return read_file(path);
}

Bytes ArtifactStore::get(const Digest& id) const {
    std::shared_lock lock(mutex_);
    Bytes payload = load_unverified(id);
    if (sha256(payload) != id) {
        throw Error(Errc::checksum_mismatch, "artifact " + id.hex() + " fails checksum verification");
    }
    return payload;
}

std::string ArtifactStore::get_text(const Digest& id) const {
    const Bytes raw = get(id);
    return std::string(raw.begin(), raw.end());
}

StoredArtifact ArtifactStore::get_artifact(const Digest& id) const {
    Bytes payload = get(id);
    std::shared_lock lock(mutex_);
    return StoredArtifact{id, kinds_.at(id), std::move(payload)};
}

bool ArtifactStore::contains(const Digest& id) const {
    std::shared_lock lock(mutex_);
    return kinds_.contains(id);
}

std::size_t ArtifactStore::size() const {
    std::shared_lock lock(mutex_);
    return kinds_.size();
}

std::optional<ArtifactKind> ArtifactStore::kind(const Digest& id) const {
    std::shared_lock lock(mutex_);
    if (auto it = kinds_.find(id); it != kinds_.end()) return it->second;
    return std::nullopt;
}

Bytes ArtifactStore::get_window(const Digest& data_id, const Bits& arg, const JashMeta& meta) const {
    if (!meta.data_record_size) {
        throw Error(Errc::window_out_of_range, "meta '" + meta.jash_id + "' defines no data_record_size");
    }
    if (meta.data_sha256 && *meta.data_sha256 != data_id) {
        throw Error(Errc::checksum_mismatch, "bundle " + data_id.hex() + " does not match meta checksum");
    }
    const Bytes bundle = get(data_id);
    const std::uint64_t size = *meta.data_record_size;
    const std::uint64_t record = arg.value();
    if (size == 0 || record >= bundle.size() / size) {
        throw Error(Errc::window_out_of_range, "record " + std::to_string(record) + " of size " +
                                                   std::to_string(size) + " lies outside a " +
                                                   std::to_string(bundle.size()) + "-byte bundle");
    }
    const auto first = bundle.begin() + static_cast<std::ptrdiff_t>(record * size);
    return Bytes(first, first + static_cast<std::ptrdiff_t>(size));
}

void ArtifactStore::bind_jash(const std::string& jash_id, const Digest& record_id) {
    std::unique_lock lock(mutex_);
    jash_records_[jash_id] = record_id;
    flush_locked();
}

std::optional<Digest> ArtifactStore::jash_record(const std::string& jash_id) const {
    std::shared_lock lock(mutex_);
    if (auto it = jash_records_.find(jash_id); it != jash_records_.end()) return it->second;
    return std::nullopt;
}

void ArtifactStore::bind_result_set(const std::string& jash_id, const Digest& result_set_id) {
    std::unique_lock lock(mutex_);
    result_sets_[jash_id] = result_set_id;
    flush_locked();
}

std::optional<Digest> ArtifactStore::result_set(const std::string& jash_id) const {
    std::shared_lock lock(mutex_);
    if (auto it = result_sets_.find(jash_id); it != result_sets_.end()) return it->second;
    return std::nullopt;
}

std::vector<Digest> ArtifactStore::queue() const {
    std::shared_lock lock(mutex_);
    return queue_;
}

void ArtifactStore::set_queue(std::vector<Digest> queue) {
    std::unique_lock lock(mutex_);
    queue_ = std::move(queue);
    flush_locked();
}

void ArtifactStore::flush() const {
    std::shared_lock lock(mutex_);
    flush_locked();
}

void ArtifactStore::flush_locked() const {
    if (!dir_) return;
    nlohmann::json j;
    j["artifacts"] = nlohmann::json::object();
    for (const auto& [id, kind] : kinds_) j["artifacts"][id.hex()] = kind_name(kind);
    j["jash"] = nlohmann::json::object();
    for (const auto& [id, digest] : jash_records_) j["jash"][id] = digest.hex();
    j["results"] = nlohmann::json::object();
    for (const auto& [id, digest] : result_sets_) j["results"][id] = digest.hex();
    j["queue"] = nlohmann::json::array();
    for (const auto& digest : queue_) j["queue"].push_back(digest.hex());
    const std::string text = j.dump(1);
    write_file(*dir_ / "catalog.json",
               ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void ArtifactStore::corrupt_for_testing(const Digest& id, std::size_t bit) {
    std::unique_lock lock(mutex_);
    Bytes payload = load_unverified(id);
    payload[(bit / 8) % payload.size()] ^= static_cast<std::uint8_t>(1U << (bit % 8));
    payloads_[id] = payload;
    if (dir_) write_file(path_for(id), payload);
}

}  // namespace pnpchain
