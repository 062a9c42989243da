// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/jash/meta.hpp"

#include <set>

#include "pnpchain/error.hpp"

namespace pnpchain {

const char* mode_name(ExecMode mode) noexcept {
    return mode == ExecMode::full ? "full" : "optimal";
}

namespace {

[[noreturn]] void bad_meta(const std::string& why) {
    throw Error(Errc::malformed_meta, "malformed meta: " + why);
}

std::uint64_t want_uint(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        bad_meta(std::string(key) + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

}  // namespace

void JashMeta::check() const {
    if (jash_id.empty()) bad_meta("jash_id must be non-empty");
    if (n < 1 || n > kMaxBitWidth) bad_meta("n must be in [1,63]");
    if (m < 1 || m > kMaxBitWidth) bad_meta("m must be in [1,63]");
    if (s < 1) bad_meta("s must be >= 1");
    if (!(importance >= 0.0 && importance <= 1.0)) bad_meta("importance must be in [0,1]");
    if (max_arg && (*max_arg == 0 || *max_arg >= (std::uint64_t{1} << n))) {
        bad_meta("max_arg must satisfy 0 < max_arg < 2^n");
    }
    if (dnf_sentinel.width() != m) bad_meta("dnf_sentinel must have exactly m characters");
    if (data_record_size && *data_record_size == 0) bad_meta("data_record_size must be >= 1");
}

std::uint64_t JashMeta::arg_count() const noexcept {
    return max_arg ? *max_arg + 1 : (std::uint64_t{1} << n);
}

void JashMeta::check_arg(const Bits& arg) const {
    if (arg.width() != n) {
        throw Error(Errc::arg_width_mismatch, "arg has " + std::to_string(arg.width()) +
                                                  " bits, meta requires " + std::to_string(n));
    }
    if (max_arg && arg.value() > *max_arg) {
        throw Error(Errc::arg_above_max, "arg " + std::to_string(arg.value()) + " exceeds max_arg " +
                                             std::to_string(*max_arg));
    }
}

nlohmann::json JashMeta::to_json() const {
    nlohmann::json j;
    j["jash_id"] = jash_id;
    j["n"] = n;
    if (max_arg) j["max_arg"] = *max_arg;
    j["m"] = m;
    j["s"] = s;
    j["mode"] = mode_name(mode);
    j["importance"] = importance;
    j["dnf_sentinel"] = dnf_sentinel.str();
    if (data_sha256) j["data_sha256"] = data_sha256->hex();
    if (data_record_size) j["data_record_size"] = *data_record_size;
    return j;
}

JashMeta JashMeta::from_json(const nlohmann::json& j) {
    if (!j.is_object()) bad_meta("expected a JSON object");
    static const std::set<std::string> known = {"jash_id", "n", "max_arg", "m", "s", "mode",
                                                "importance", "dnf_sentinel", "data_sha256",
                                                "data_record_size"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) bad_meta("unknown key '" + key + "'");
    }
    for (const char* key : {"jash_id", "n", "m", "s", "mode", "importance"}) {
        if (!j.contains(key)) bad_meta(std::string("missing key '") + key + "'");
    }
    const auto present = [&](const char* key) { return j.contains(key) && !j.at(key).is_null(); };

    JashMeta meta;
    try {
        if (!j.at("jash_id").is_string()) bad_meta("jash_id must be a string");
        meta.jash_id = j.at("jash_id").get<std::string>();
        const auto n = want_uint(j, "n");
        const auto m = want_uint(j, "m");
        if (n < 1 || n > kMaxBitWidth) bad_meta("n must be in [1,63]");
        if (m < 1 || m > kMaxBitWidth) bad_meta("m must be in [1,63]");
        meta.n = static_cast<int>(n);
        meta.m = static_cast<int>(m);
        meta.s = want_uint(j, "s");
        if (present("max_arg")) meta.max_arg = want_uint(j, "max_arg");

        const auto& mode = j.at("mode");
        if (mode == "full") {
            meta.mode = ExecMode::full;
        } else if (mode == "optimal") {
            meta.mode = ExecMode::optimal;
        } else {
            bad_meta("mode must be \"full\" or \"optimal\"");
        }

        if (!j.at("importance").is_number()) bad_meta("importance must be a number");
        meta.importance = j.at("importance").get<double>();

        if (present("dnf_sentinel")) {
            const auto& sentinel = j.at("dnf_sentinel");
            if (!sentinel.is_string()) bad_meta("dnf_sentinel must be a bit string");
            const auto text = sentinel.get<std::string>();
            if (meta.m < 0 || text.size() != static_cast<std::size_t>(meta.m)) bad_meta("dnf_sentinel must have exactly m characters");
            meta.dnf_sentinel = Bits::parse(text);
        } else {
            meta.dnf_sentinel = Bits::ones(meta.m);
        }
        if (present("data_sha256")) {
            if (!j.at("data_sha256").is_string()) bad_meta("data_sha256 must be a hex string");
            meta.data_sha256 = Digest::from_hex(j.at("data_sha256").get<std::string>());
        }
        if (present("data_record_size")) meta.data_record_size = want_uint(j, "data_record_size");
    } catch (const Error& e) {
        if (e.code() == Errc::malformed_meta) throw;
        bad_meta(e.what());
    } catch (const nlohmann::json::exception& e) {
        bad_meta(e.what());
    }
    meta.check();
    return meta;
}

JashMeta JashMeta::parse(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        bad_meta(e.what());
    }
    return from_json(j);
}

}  // namespace pnpchain
