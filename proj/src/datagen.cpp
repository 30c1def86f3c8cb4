#include "dfalearn/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dfalearn {

namespace {

// True when some word with the wanted verdict exists in the length
// window: dynamic program over (length, state) reachability.
bool verdict_reachable(const Dfa& dfa, int min_len, int max_len, bool want_accept) {
    const int n = dfa.state_count();
    std::vector<char> reach(static_cast<std::size_t>(n), 0);
    reach[0] = 1;
    for (int len = 0; len <= max_len; ++len) {
        if (len >= min_len) {
            for (int q = 0; q < n; ++q) {
                if (reach[static_cast<std::size_t>(q)] && dfa.is_final(q) == want_accept) return true;
            }
        }
        std::vector<char> next(static_cast<std::size_t>(n), 0);
        for (int q = 0; q < n; ++q) {
            if (!reach[static_cast<std::size_t>(q)]) continue;
            for (int a = 0; a < dfa.alphabet_size(); ++a) {
                next[static_cast<std::size_t>(dfa.next_state(q, a))] = 1;
            }
        }
        reach = std::move(next);
    }
    return false;
}

long long round_half_up(double v) { return static_cast<long long>(std::floor(v + 0.5)); }

} // namespace

GeneratedData generate(const GenSpec& spec) {
    if (spec.n_total < 1) throw InputError("n_total must be positive");
    if (!(spec.anomaly_ratio >= 0.0 && spec.anomaly_ratio <= 1.0)) {
        throw InputError("anomaly ratio must lie in [0, 1]");
    }
    if (spec.min_len < 0 || spec.min_len > spec.max_len) {
        throw InputError("need 0 <= min_len <= max_len");
    }
    const Dfa& planted = spec.planted;
    const Dfa& source = spec.normal_source ? *spec.normal_source : planted;
    if (source.alphabet() != planted.alphabet()) {
        throw InputError("normal source must share the planted DFA's alphabet");
    }
    if (!verdict_reachable(planted, spec.min_len, spec.max_len, true)) {
        throw DegeneratePlantedDfaError("planted DFA accepts nothing within the length range");
    }
    if (!verdict_reachable(planted, spec.min_len, spec.max_len, false)) {
        throw DegeneratePlantedDfaError("planted DFA rejects nothing within the length range");
    }

    const long long anomalies = round_half_up(spec.anomaly_ratio * static_cast<double>(spec.n_total));
    const long long normals = spec.n_total - anomalies;
    const long long test_anomalies = round_half_up(0.2 * static_cast<double>(anomalies));
    const long long test_normals = round_half_up(0.2 * static_cast<double>(normals));
    const long long train_anomalies = anomalies - test_anomalies;
    const long long train_normals = normals - test_normals;

    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> pick_symbol(0, std::max(0, planted.alphabet_size() - 1));
    std::bernoulli_distribution grow(0.8);

    auto sample_length = [&] {
        // Truncated geometric: start at min_len, extend with probability
        // 0.8 until max_len.
        int len = spec.min_len;
        while (len < spec.max_len && grow(rng)) ++len;
        return len;
    };

    auto draw_word = [&](const Dfa& walk_source, bool want_accept) {
        if (walk_source.alphabet_size() == 0 && spec.min_len > 0) {
            throw DegeneratePlantedDfaError("empty alphabet cannot produce non-empty words");
        }
        for (int attempt = 0; attempt < 1000000; ++attempt) {
            const int len = sample_length();
            Word w;
            w.reserve(static_cast<std::size_t>(len));
            for (int i = 0; i < len; ++i) {
                w.push_back(walk_source.alphabet()[static_cast<std::size_t>(pick_symbol(rng))]);
            }
            if (accepts(planted, w) == want_accept) return w;
        }
        throw DegeneratePlantedDfaError("rejection sampling failed to hit the wanted verdict");
    };

    GeneratedData out;
    for (long long i = 0; i < train_anomalies; ++i) out.train.add(draw_word(planted, true));
    for (long long i = 0; i < train_normals; ++i) out.train.add(draw_word(source, false));
    for (long long i = 0; i < test_anomalies; ++i) {
        out.test.push_back({draw_word(planted, true), SeqLabel::Anomaly});
    }
    for (long long i = 0; i < test_normals; ++i) {
        out.test.push_back({draw_word(source, false), SeqLabel::Normal});
    }
    std::shuffle(out.test.begin(), out.test.end(), rng);
    return out;
}

} // namespace dfalearn
