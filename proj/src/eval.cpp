#include "dfalearn/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dfalearn {

LabeledSet read_labels_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open labels file: " + path.string());
    LabeledSet items;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw InputError("labels file line without a tab separator: " + line);
        }
        const std::string label = line.substr(0, tab);
        LabeledItem item;
        item.word = parse_word(line.substr(tab + 1));
        if (label == "anomaly") {
            item.label = SeqLabel::Anomaly;
        } else if (label == "normal") {
            item.label = SeqLabel::Normal;
        } else {
            throw InputError("unknown label '" + label + "' (want anomaly|normal)");
        }
        items.push_back(std::move(item));
    }
    return items;
}

void write_labels_file(const LabeledSet& items, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write labels file: " + path.string());
    for (const LabeledItem& item : items) {
        out << (item.label == SeqLabel::Anomaly ? "anomaly" : "normal") << '\t'
            << format_word(item.word) << '\n';
    }
}

Metrics evaluate(const Dfa& dfa, const LabeledSet& test, UnknownSymbolPolicy policy) {
    Metrics m;
    for (const LabeledItem& item : test) {
        bool predicted_anomaly = false;
        try {
            predicted_anomaly = accepts(dfa, item.word);
        } catch (const UnknownSymbolError&) {
            if (policy == UnknownSymbolPolicy::Error) throw;
            predicted_anomaly = false;
        }
        const bool is_anomaly = item.label == SeqLabel::Anomaly;
        if (predicted_anomaly && is_anomaly) ++m.tp;
        else if (predicted_anomaly && !is_anomaly) ++m.fp;
        else if (!predicted_anomaly && is_anomaly) ++m.fn;
        else ++m.tn;
    }
    m.precision = (m.tp + m.fp) > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

std::pair<long long, long long> bounds_from_ratio(const Sample& train, double ratio) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) throw InputError("anomaly ratio must lie in [0, 1]");
    const long long total = train.total_size();
    // Round the ratio down/up to whole percents first, then scale. The
    // epsilon absorbs binary representation noise so e.g. 0.10 really
    // maps to the percent pair (10, 10).
    const long long pct_down = static_cast<long long>(std::floor(100.0 * ratio + 1e-9));
    const long long pct_up = static_cast<long long>(std::ceil(100.0 * ratio - 1e-9));
    const long long lower = pct_down * total / 100;
    const long long upper = (pct_up * total + 99) / 100;
    return {lower, std::min(upper, total)};
}

std::pair<long long, long long> loosen_bounds(std::pair<long long, long long> bounds, double delta,
                                              long long total, LoosenMode mode) {
    if (!(delta >= 0.0 && delta <= 1.0)) throw InputError("loosening delta must lie in [0, 1]");
    const long long shift = static_cast<long long>(std::floor(delta * static_cast<double>(total) + 0.5 + 1e-9));
    auto [lower, upper] = bounds;
    if (mode == LoosenMode::TwoBound || mode == LoosenMode::SingleLower) {
        lower = std::max<long long>(0, lower - shift);
    }
    if (mode == LoosenMode::TwoBound || mode == LoosenMode::SingleUpper) {
        upper = std::min(total, upper + shift);
    }
    return {lower, upper};
}

namespace {

std::string format_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

SweepRow run_one(const SweepDataset& ds, LearnMode mode, int requested_states, double delta,
                 long long lower, long long upper, const SweepConfig& config) {
    SweepRow row;
    row.goal = ds.goal;
    row.mode = learn_mode_name(mode);
    row.states = requested_states;
    row.bound_relax = delta;

    const auto t0 = std::chrono::steady_clock::now();
    try {
        LearnReport report;
        switch (mode) {
        case LearnMode::TwoBound:
            report = learn_two_bound(ds.train, lower, upper, config.regularizers, config.backend,
                                     config.options);
            break;
        case LearnMode::SingleBoundLower:
            report = learn_single_bound(ds.train, mode, lower, requested_states, config.regularizers,
                                        config.backend);
            break;
        case LearnMode::SingleBoundUpper:
            report = learn_single_bound(ds.train, mode, upper, requested_states, config.regularizers,
                                        config.backend);
            break;
        }
        row.accepted_count = report.accepted_count;
        if (report.found()) {
            row.status = "ok";
            row.states = report.dfa->state_count();
            row.f1 = evaluate(*report.dfa, ds.test, UnknownSymbolPolicy::RejectWord).f1;
        } else {
            row.status = "no-dfa-exists";
        }
    } catch (const Error&) {
        row.status = "error";
    }
    row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

} // namespace

std::vector<SweepRow> run_sweep(const std::vector<SweepDataset>& datasets, const SweepConfig& config) {
    const bool single_modes =
        std::any_of(config.modes.begin(), config.modes.end(),
                    [](LearnMode m) { return m != LearnMode::TwoBound; });
    if (config.modes.empty()) throw InputError("sweep needs at least one mode");
    if (config.deltas.empty()) throw InputError("sweep needs at least one delta");
    if (single_modes && config.sizes.empty()) {
        throw InputError("sweep over an empty size list");
    }

    std::vector<SweepRow> rows;
    for (const SweepDataset& ds : datasets) {
        const long long total = ds.train.total_size();
        const auto base = bounds_from_ratio(ds.train, ds.anomaly_ratio);
        for (LearnMode mode : config.modes) {
            if (mode == LearnMode::TwoBound) {
                for (double delta : config.deltas) {
                    const auto b = loosen_bounds(base, delta, total, LoosenMode::TwoBound);
                    rows.push_back(run_one(ds, mode, 0, delta, b.first, b.second, config));
                }
            } else {
                const LoosenMode lm = mode == LearnMode::SingleBoundLower ? LoosenMode::SingleLower
                                                                          : LoosenMode::SingleUpper;
                for (int n : config.sizes) {
                    for (double delta : config.deltas) {
                        const auto b = loosen_bounds(base, delta, total, lm);
                        rows.push_back(run_one(ds, mode, n, delta, b.first, b.second, config));
                    }
                }
            }
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "goal,mode,states,bound_relax,time_s,f1,accepted_count,status\n";
    for (const SweepRow& row : rows) {
        out << row.goal << ',' << row.mode << ',' << row.states << ','
            << format_fixed(row.bound_relax, 2) << ',' << format_fixed(row.time_s, 3) << ','
            << format_fixed(row.f1, 4) << ',' << row.accepted_count << ',' << row.status << '\n';
    }
    return out.str();
}

} // namespace dfalearn
