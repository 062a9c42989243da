// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnpchain {

enum class Errc {
    syntax,
    unknown_identifier,
    malformed_meta,
    arg_width_mismatch,
    arg_above_max,
    step_budget_exceeded,
    transform,
    not_validated,
    empty_payload,
    not_found,
    window_out_of_range,
    checksum_mismatch,
    block_not_closed,
    no_submissions,
    incomplete_coverage,
    no_qualifying_submission,
    empty_input,
    decode,
    sim_stall,
    index_out_of_range,
    value_out_of_space,
    io,
    duplicate_jash,
    config,
};

const char* errc_name(Errc code) noexcept;

/// Base of every error thrown by the library. `code()` is stable; `what()` is for humans.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, int line, int column)
        : Error(Errc::syntax, "SyntaxError at " + std::to_string(line) + ":" +
                                  std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(const std::string& name, int line, int column)
        : Error(Errc::unknown_identifier, "UnknownIdentifier '" + name + "' at " +
                                              std::to_string(line) + ":" +
                                              std::to_string(column)),
          name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class IncompleteCoverage : public Error {
public:
    explicit IncompleteCoverage(std::vector<std::uint64_t> missing);

    const std::vector<std::uint64_t>& missing() const noexcept { return missing_; }

private:
    std::vector<std::uint64_t> missing_;
};

}  // namespace pnpchain
