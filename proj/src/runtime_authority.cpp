// pnpchain: proof-of-useful-work chain with bounded jash programs
// Licensed under the Apache License, Version 2.0.
#include "pnpchain/runtime_authority.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "pnpchain/error.hpp"
#include "pnpchain/jash/interpreter.hpp"
#include "pnpchain/jash/parser.hpp"

namespace pnpchain::ra {

std::string ReviewReport::render() const {
    std::string out = fmt::format("compiles: {}\n", compiles ? "yes" : "no");
    if (!compiles) return out + "diagnostics: " + diagnostics + "\n";
    out += fmt::format("worst_case_steps: {}\ndegree_c: {}\n", bound.worst_case_steps, bound.degree_c);
    out += fmt::format("mean_steps: {:.3f}\nstddev_steps: {:.3f}\n", mean_steps, stddev_steps);
    out += fmt::format("priority: {:.6f}\nvetoed: {}\n", priority, vetoed ? "yes" : "no");
    return out;
}

double priority_of(double importance, double mean_steps, std::uint64_t num_args, std::uint64_t d) {
    const double cost = mean_steps * static_cast<double>(num_args) + static_cast<double>(d) / 1024.0;
    return std::clamp(importance / (1.0 + std::log2(1.0 + cost)), 0.0, 1.0);
}

ReviewReport review(std::string_view source, const JashMeta& meta, std::optional<ByteView> data,
                    std::optional<double> importance, bool veto) {
    ReviewReport report;
    report.vetoed = veto;
    const auto reject = [&](std::string why) {
        ReviewReport r;
        r.vetoed = veto;
        r.diagnostics = std::move(why);
        return r;
    };
    try {
        meta.check();
        const jash::JashProgram prog = jash::parse(source);
        if (const auto v = jash::validate(prog, meta); !v.ok()) return reject(v.summary());
        if (meta.data_sha256 && (!data || sha256(*data) != *meta.data_sha256)) {
            return reject("data bundle missing or not matching data_sha256");
        }
        const ByteView bundle = data.value_or(ByteView());
        const jash::BoundedJash job(prog, meta);
        const jash::BundleWindows windows(bundle, meta.data_record_size);

        std::mt19937_64 rng(kReviewSeed);
        const std::uint64_t count = meta.arg_count();
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int k = 0; k < kReviewSamples; ++k) {
            const auto steps = static_cast<double>(job.run(rng() % count, windows).steps_used);
            sum += steps;
            sum_sq += steps * steps;
        }
        report.compiles = true;
        report.bound = job.bound();
        report.mean_steps = sum / kReviewSamples;
        report.stddev_steps = std::sqrt(std::max(0.0, sum_sq / kReviewSamples - report.mean_steps * report.mean_steps));
        report.priority = priority_of(importance.value_or(meta.importance), report.mean_steps, count, bundle.size());
        return report;
    } catch (const Error& e) {
        return reject(e.what());
    }
}

std::vector<QueueEntry> prioritize(std::vector<QueueEntry> queue) {
    std::erase_if(queue, [](const QueueEntry& e) { return e.report.vetoed || !e.report.compiles; });
    std::stable_sort(queue.begin(), queue.end(),
                     [](const QueueEntry& a, const QueueEntry& b) { return a.report.priority > b.report.priority; });
    return queue;
}

RuntimeAuthority::RuntimeAuthority(ArtifactStore& store) : store_(store) {}

SubmitResult RuntimeAuthority::submit(std::string_view source, const JashMeta& meta, std::optional<ByteView> data,
                                      std::optional<double> importance, bool veto) {
    meta.check();
    if (importance && !(*importance >= 0.0 && *importance <= 1.0)) {
        throw Error(Errc::malformed_meta, fmt::format("importance must be in [0,1], got {}", *importance));
    }
    if (meta.jash_id.starts_with("classic-")) {
        throw Error(Errc::malformed_meta, "jash ids starting with 'classic-' are reserved");
    }
    if (store_.jash_record(meta.jash_id)) {
        throw Error(Errc::duplicate_jash, "jash '" + meta.jash_id + "' is already filed");
    }

    SubmitResult result;
    result.jash_id = meta.jash_id;
    result.report = review(source, meta, data, importance, veto);
    if (!result.report.compiles) return result;

    SubmissionRecord record;
    record.source_id = store_.put(source, ArtifactKind::jash_source);
    if (data) record.data_id = store_.put(*data, ArtifactKind::data);
    record.meta = meta;
    record.importance = importance.value_or(meta.importance);
    record.veto = veto;
    const Digest record_id = store_.put(record.canonical(), ArtifactKind::meta);
    store_.bind_jash(meta.jash_id, record_id);
    reviews_[record_id] = result.report;
    result.record_id = record_id;

    if (!veto) {
        auto queue = store_.queue();
        queue.push_back(record_id);
        store_.set_queue(std::move(queue));
        result.enqueued = true;
    }
    return result;
}

QueueEntry RuntimeAuthority::entry_for(const Digest& record_id) const {
    const auto record = SubmissionRecord::from_json(nlohmann::json::parse(store_.get_text(record_id)));
    auto it = reviews_.find(record_id);
    if (it == reviews_.end()) {
        const std::string source = store_.get_text(record.source_id);
        std::optional<Bytes> data;
        if (record.data_id) data = store_.get(*record.data_id);
        const auto report = data ? review(source, record.meta, ByteView(*data), record.importance, record.veto)
                                 : review(source, record.meta, std::nullopt, record.importance, record.veto);
        it = reviews_.emplace(record_id, report).first;
    }
    return {record.meta.jash_id, record_id, it->second};
}

std::vector<QueueEntry> RuntimeAuthority::schedule() const {
    std::vector<QueueEntry> entries;
    for (const auto& id : store_.queue()) entries.push_back(entry_for(id));
    return prioritize(std::move(entries));
}

PublishedJash RuntimeAuthority::classic_problem(std::uint64_t height, const Digest& prev_hash, std::uint64_t attempt) {
    PublishedJash p;
    p.jash_id = ledger::classic_id(height, attempt);
    p.block_height = height;
    p.mode = ledger::BlockMode::classic;
    p.meta = jash::ClassicJash::default_meta(p.jash_id);
    p.header = ledger::classic_header(prev_hash, height, attempt);
    return p;
}

PublishedJash RuntimeAuthority::publish_next(std::uint64_t height, const Digest& prev_hash, std::uint64_t attempt) {
    const auto schedule = this->schedule();
    if (schedule.empty()) return classic_problem(height, prev_hash, attempt);

    const QueueEntry& head = schedule.front();
    auto queue = store_.queue();
    queue.erase(std::find(queue.begin(), queue.end(), head.record_id));
    store_.set_queue(std::move(queue));

    const auto record = SubmissionRecord::from_json(nlohmann::json::parse(store_.get_text(head.record_id)));
    PublishedJash p;
    p.jash_id = head.jash_id;
    p.block_height = height;
    p.mode = ledger::block_mode_from(record.meta.mode);
    p.meta = record.meta;
    p.source_id = record.source_id;
    p.data_id = record.data_id;
    return p;
}

Job RuntimeAuthority::job_for(const PublishedJash& published) const {
    if (published.mode == ledger::BlockMode::classic) {
        return Job::classic(jash::ClassicJash(*published.header, published.meta));
    }
    return load_job(store_, published.jash_id);
}

std::optional<Digest> RuntimeAuthority::aggregate(const ledger::Block& block,
                                                  std::optional<std::string_view> full_result_set) {
    if (block.block_hash != block.compute_hash()) {
        throw Error(Errc::block_not_closed, fmt::format("block {} is not sealed", block.height));
    }
    std::string text;
    switch (block.mode) {
        case ledger::BlockMode::classic:
            return std::nullopt;
        case ledger::BlockMode::optimal:
            text = ledger::result_set_json({{*block.winner_arg, *block.winner_res}});
            break;
        case ledger::BlockMode::full:
            if (!full_result_set || sha256(*full_result_set) != *block.results_root) {
                throw Error(Errc::block_not_closed,
                            fmt::format("block {} has no result set matching its results_root", block.height));
            }
            text = std::string(*full_result_set);
            break;
    }
    const Digest id = store_.put(text, ArtifactKind::result_set);
    store_.bind_result_set(block.jash_id, id);
    return id;
}

}  // namespace pnpchain::ra
