// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "pnpchain/bits.hpp"
#include "pnpchain/jash/analysis.hpp"
#include "pnpchain/jash/ast.hpp"
#include "pnpchain/jash/meta.hpp"

namespace pnpchain::jash {

/// Supplies the data record a program may read through `data(offset, len)` for one arg.
class DataWindowProvider {
public:
    virtual ~DataWindowProvider() = default;
    virtual ByteView window(std::uint64_t argval) const = 0;
};

class NoData final : public DataWindowProvider {
public:
    ByteView window(std::uint64_t) const override { return {}; }
};

/// Linear records over an already verified bundle: record k is [k*size, (k+1)*size).
/// Records past the end of the bundle read as empty. With no record size the whole
/// bundle is the window for every arg.
class BundleWindows final : public DataWindowProvider {
public:
    BundleWindows(ByteView bundle, std::optional<std::uint64_t> record_size)
        : bundle_(bundle), record_size_(record_size) {}

    ByteView window(std::uint64_t argval) const override;

private:
    ByteView bundle_;
    std::optional<std::uint64_t> record_size_;
};

enum class HaltReason { output_stmt, end_of_program, sentinel };

const char* halt_name(HaltReason reason) noexcept;

struct ExecResult {
    Bits res;
    std::uint64_t steps_used = 0;
    HaltReason halted_by = HaltReason::end_of_program;

    bool operator==(const ExecResult&) const = default;
};

/// A program paired with its meta after validation, with the static bound computed once.
class BoundedJash {
public:
    /// Throws Error(not_validated) listing violations if `prog` does not validate.
    BoundedJash(JashProgram prog, JashMeta meta);

    const JashProgram& program() const noexcept { return prog_; }
    const JashMeta& meta() const noexcept { return meta_; }
    const ComplexityBound& bound() const noexcept { return bound_; }

    ExecResult run(const Bits& arg, const DataWindowProvider& data) const;
    ExecResult run(std::uint64_t argval, const DataWindowProvider& data) const {
        return run(meta_.arg_bits(argval), data);
    }

private:
    JashProgram prog_;
    JashMeta meta_;
    ComplexityBound bound_;
};

/// Deterministic execution. Throws ArgWidthMismatch, ArgAboveMax, NotValidated, or
/// StepBudgetExceeded if execution would pass the static bound.
ExecResult execute(const JashProgram& prog, const JashMeta& meta, const Bits& arg,
                   const DataWindowProvider& data = NoData{});

/// Same as execute() but with an explicit step budget; skips validation.
ExecResult execute_unchecked(const JashProgram& prog, const JashMeta& meta, const Bits& arg,
                             const DataWindowProvider& data, std::uint64_t step_budget);

}  // namespace pnpchain::jash
