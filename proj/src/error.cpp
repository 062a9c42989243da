// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/error.hpp"

namespace pnpchain {

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::syntax: return "SyntaxError";
        case Errc::unknown_identifier: return "UnknownIdentifier";
        case Errc::malformed_meta: return "MalformedMeta";
        case Errc::arg_width_mismatch: return "ArgWidthMismatch";
        case Errc::arg_above_max: return "ArgAboveMax";
        case Errc::step_budget_exceeded: return "StepBudgetExceeded";
        case Errc::transform: return "TransformError";
        case Errc::not_validated: return "NotValidated";
        case Errc::empty_payload: return "EmptyPayload";
        case Errc::not_found: return "NotFound";
        case Errc::window_out_of_range: return "WindowOutOfRange";
        case Errc::checksum_mismatch: return "ChecksumMismatch";
        case Errc::block_not_closed: return "BlockNotClosed";
        case Errc::no_submissions: return "NoSubmissions";
        case Errc::incomplete_coverage: return "IncompleteCoverage";
        case Errc::no_qualifying_submission: return "NoQualifyingSubmission";
        case Errc::empty_input: return "EmptyInput";
        case Errc::decode: return "DecodeError";
        case Errc::sim_stall: return "SimStall";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::value_out_of_space: return "ValueOutOfSpace";
        case Errc::io: return "IoError";
        case Errc::duplicate_jash: return "DuplicateJash";
        case Errc::config: return "ConfigError";
    }
    return "Unknown";
}

namespace {

std::string describe_missing(const std::vector<std::uint64_t>& missing) {
    std::string text = "IncompleteCoverage: " + std::to_string(missing.size()) + " args missing";
    const std::size_t shown = missing.size() < 8 ? missing.size() : 8;
    for (std::size_t i = 0; i < shown; ++i) {
        text += (i == 0 ? " [" : ", ") + std::to_string(missing[i]);
    }
    if (shown != 0) text += missing.size() > shown ? ", ...]" : "]";
    return text;
}

}  // namespace

IncompleteCoverage::IncompleteCoverage(std::vector<std::uint64_t> missing)
    : Error(Errc::incomplete_coverage, describe_missing(missing)), missing_(std::move(missing)) {}

}  // namespace pnpchain
