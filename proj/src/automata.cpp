#include "dfalearn/automata.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dfalearn {

std::string format_word(const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i > 0) out += ' ';
        out += w[i];
    }
    return out;
}

Word parse_word(const std::string& line) {
    Word w;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) w.push_back(tok);
    return w;
}

void validate_symbol(const Symbol& s) {
    if (s.empty()) throw InputError("empty symbol");
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            throw InputError("symbol contains whitespace: '" + s + "'");
        }
    }
}

void Sample::add(const Word& w, long long count) {
    if (count <= 0) throw InputError("non-positive multiplicity");
    for (const Symbol& s : w) validate_symbol(s);
    entries_[w] += count;
    for (const Symbol& s : w) {
        auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), s);
        if (it == alphabet_.end() || *it != s) alphabet_.insert(it, s);
    }
}

long long Sample::multiplicity(const Word& w) const {
    auto it = entries_.find(w);
    return it == entries_.end() ? 0 : it->second;
}

long long Sample::total_size() const {
    long long total = 0;
    for (const auto& [w, count] : entries_) total += count;
    return total;
}

Sample Sample::read(std::istream& in) {
    Sample s;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.front() == '#') continue;
        s.add(parse_word(line));
    }
    return s;
}

Sample Sample::read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open sample file: " + path.string());
    return read(in);
}

void Sample::write(std::ostream& out) const {
    for (const auto& [w, count] : entries_) {
        for (long long i = 0; i < count; ++i) out << format_word(w) << '\n';
    }
}

void Sample::write_file(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write sample file: " + path.string());
    write(out);
}

Dfa::Dfa(std::vector<Symbol> alphabet, std::vector<int> transitions, std::vector<bool> finals)
    : alphabet_(std::move(alphabet)), transitions_(std::move(transitions)), finals_(std::move(finals)) {
    if (finals_.empty()) throw InputError("DFA needs at least one state");
    const int n = static_cast<int>(finals_.size());
    for (const Symbol& s : alphabet_) validate_symbol(s);
    std::set<Symbol> seen(alphabet_.begin(), alphabet_.end());
    if (seen.size() != alphabet_.size()) throw InputError("duplicate alphabet symbol");
    if (transitions_.size() != finals_.size() * alphabet_.size()) {
        throw InputError("transition table is not total");
    }
    for (int t : transitions_) {
        if (t < 0 || t >= n) throw InputError("transition target out of range");
    }
}

int Dfa::symbol_index(const Symbol& s) const {
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
        if (alphabet_[i] == s) return static_cast<int>(i);
    }
    throw UnknownSymbolError("symbol '" + s + "' not in alphabet");
}

int Dfa::next_state(int state, int symbol_idx) const {
    return transitions_.at(static_cast<std::size_t>(state) * alphabet_.size() +
                           static_cast<std::size_t>(symbol_idx));
}

std::vector<int> Dfa::final_states() const {
    std::vector<int> out;
    for (int q = 0; q < state_count(); ++q) {
        if (finals_[static_cast<std::size_t>(q)]) out.push_back(q);
    }
    return out;
}

std::vector<int> run(const Dfa& dfa, const Word& w) {
    std::vector<int> states;
    states.reserve(w.size() + 1);
    int q = 0;
    states.push_back(q);
    for (const Symbol& s : w) {
        q = dfa.next_state(q, dfa.symbol_index(s));
        states.push_back(q);
    }
    return states;
}

bool accepts(const Dfa& dfa, const Word& w) {
    int q = 0;
    for (const Symbol& s : w) q = dfa.next_state(q, dfa.symbol_index(s));
    return dfa.is_final(q);
}

long long count_accepted(const Dfa& dfa, const Sample& sample) {
    long long total = 0;
    for (const auto& [w, count] : sample.entries()) {
        if (accepts(dfa, w)) total += count;
    }
    return total;
}

std::string to_dot(const Dfa& dfa, const DotOptions& options) {
    std::ostringstream out;
    out << "digraph dfa {\n";
    out << "  rankdir=LR;\n";
    out << "  __start [shape=none, label=\"\"];\n";
    for (int q = 0; q < dfa.state_count(); ++q) {
        out << "  q" << q << " [shape=" << (dfa.is_final(q) ? "doublecircle" : "circle") << "];\n";
    }
    out << "  __start -> q0;\n";
    for (int q = 0; q < dfa.state_count(); ++q) {
        // Merge same-target edges into one label, symbols in alphabet order.
        for (int target = 0; target < dfa.state_count(); ++target) {
            if (options.omit_self_loops && target == q) continue;
            std::string label;
            for (int a = 0; a < dfa.alphabet_size(); ++a) {
                if (dfa.next_state(q, a) != target) continue;
                if (!label.empty()) label += ",";
                label += dfa.alphabet()[static_cast<std::size_t>(a)];
            }
            if (label.empty()) continue;
            out << "  q" << q << " -> q" << target << " [label=\"" << label << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string dfa_to_json(const Dfa& dfa) {
    nlohmann::json j;
    j["n"] = dfa.state_count();
    j["alphabet"] = dfa.alphabet();
    j["initial"] = 0;
    nlohmann::json transitions = nlohmann::json::array();
    for (int q = 0; q < dfa.state_count(); ++q) {
        for (int a = 0; a < dfa.alphabet_size(); ++a) {
            transitions.push_back({q, dfa.alphabet()[static_cast<std::size_t>(a)], dfa.next_state(q, a)});
        }
    }
    j["transitions"] = std::move(transitions);
    j["finals"] = dfa.final_states();
    return j.dump(2) + "\n";
}

Dfa dfa_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad DFA JSON: ") + e.what());
    }
    try {
        const int n = j.at("n").get<int>();
        if (n <= 0) throw InputError("bad DFA JSON: n must be positive");
        if (j.at("initial").get<int>() != 0) {
            throw InputError("bad DFA JSON: initial state must be 0");
        }
        auto alphabet = j.at("alphabet").get<std::vector<Symbol>>();
        std::vector<int> transitions(static_cast<std::size_t>(n) * alphabet.size(), -1);
        std::map<Symbol, int> index;
        for (std::size_t i = 0; i < alphabet.size(); ++i) index[alphabet[i]] = static_cast<int>(i);
        for (const auto& entry : j.at("transitions")) {
            if (!entry.is_array() || entry.size() != 3) {
                throw InputError("bad DFA JSON: transition entries are [state, symbol, state]");
            }
            const int q = entry[0].get<int>();
            const Symbol sym = entry[1].get<Symbol>();
            const int target = entry[2].get<int>();
            auto it = index.find(sym);
            if (it == index.end()) throw InputError("bad DFA JSON: transition on unknown symbol " + sym);
            if (q < 0 || q >= n || target < 0 || target >= n) {
                throw InputError("bad DFA JSON: transition state out of range");
            }
            int& slot = transitions[static_cast<std::size_t>(q) * alphabet.size() +
                                    static_cast<std::size_t>(it->second)];
            if (slot != -1) throw InputError("bad DFA JSON: duplicate transition");
            slot = target;
        }
        for (int t : transitions) {
            if (t == -1) throw InputError("bad DFA JSON: transition table is not total");
        }
        std::vector<bool> finals(static_cast<std::size_t>(n), false);
        for (const auto& q : j.at("finals")) {
            const int state = q.get<int>();
            if (state < 0 || state >= n) throw InputError("bad DFA JSON: final state out of range");
            finals[static_cast<std::size_t>(state)] = true;
        }
        return Dfa(std::move(alphabet), std::move(transitions), std::move(finals));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad DFA JSON: ") + e.what());
    }
}

void write_dfa_file(const Dfa& dfa, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write DFA file: " + path.string());
    out << dfa_to_json(dfa);
}

Dfa read_dfa_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open DFA file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return dfa_from_json(buf.str());
}

} // namespace dfalearn
