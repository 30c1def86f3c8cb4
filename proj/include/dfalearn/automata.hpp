#ifndef DFALEARN_AUTOMATA_HPP
#define DFALEARN_AUTOMATA_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dfalearn/errors.hpp"

namespace dfalearn {

// A symbol is an arbitrary non-empty token without whitespace; a word is a
// finite sequence of symbols. The empty vector is the empty word.
using Symbol = std::string;
using Word = std::vector<Symbol>;

// Space-separated rendering; the empty word renders as "".
std::string format_word(const Word& w);
// Splits on runs of spaces/tabs; "" parses to the empty word.
Word parse_word(const std::string& line);

// Throws InputError if the token is empty or contains whitespace.
void validate_symbol(const Symbol& s);

// A finite multi-set of words. Multiplicities are kept explicitly, so
// membership queries and the total size |S| (sum of multiplicities) are
// cheap. The alphabet is exactly the set of symbols occurring in the
// sample, kept sorted.
class Sample {
public:
    Sample() = default;

    // Adds `count` occurrences of `w` (count >= 1).
    void add(const Word& w, long long count = 1);

    long long multiplicity(const Word& w) const;
    bool contains(const Word& w) const { return multiplicity(w) > 0; }

    // Number of distinct words (m in the model size formulas).
    std::size_t unique_count() const { return entries_.size(); }
    // Total size counting multiplicities, |S|.
    long long total_size() const;
    bool empty() const { return entries_.empty(); }

    // Distinct words with their multiplicities, ordered by word
    // (length-lexicographic order is NOT used here; this is std::map order,
    // i.e. plain lexicographic on the token vectors).
    const std::map<Word, long long>& entries() const { return entries_; }

    // Sorted distinct symbols occurring in the sample.
    const std::vector<Symbol>& alphabet() const { return alphabet_; }

    // Text format: one word per line, symbols separated by single spaces.
    // Blank lines denote the empty word; every line counts one occurrence
    // and repeated lines accumulate multiplicity. Lines starting with '#'
    // are comments.
    static Sample read(std::istream& in);
    static Sample read_file(const std::filesystem::path& path);
    void write(std::ostream& out) const;
    void write_file(const std::filesystem::path& path) const;

private:
    std::map<Word, long long> entries_;
    std::vector<Symbol> alphabet_;
};

// A complete deterministic finite automaton. States are 0..n-1 and state 0
// is initial. The transition function is total: exactly one successor per
// (state, symbol). Instances are immutable once constructed; the
// constructor validates completeness.
class Dfa {
public:
    // `transitions` is row-major: entry [q * alphabet.size() + a] is the
    // successor of state q on the a-th alphabet symbol. `finals` has one
    // flag per state and determines the state count.
    Dfa(std::vector<Symbol> alphabet, std::vector<int> transitions, std::vector<bool> finals);

    int state_count() const { return static_cast<int>(finals_.size()); }
    const std::vector<Symbol>& alphabet() const { return alphabet_; }
    int alphabet_size() const { return static_cast<int>(alphabet_.size()); }

    // Index of `s` in the alphabet; throws UnknownSymbolError if absent.
    int symbol_index(const Symbol& s) const;

    int next_state(int state, int symbol_idx) const;
    bool is_final(int state) const { return finals_.at(static_cast<std::size_t>(state)); }
    std::vector<int> final_states() const;

    const std::vector<int>& transition_table() const { return transitions_; }

private:
    std::vector<Symbol> alphabet_;
    std::vector<int> transitions_;
    std::vector<bool> finals_;
};

// The visited state sequence for `w`, starting at state 0; has |w|+1
// entries. Throws UnknownSymbolError on symbols outside the alphabet.
std::vector<int> run(const Dfa& dfa, const Word& w);
bool accepts(const Dfa& dfa, const Word& w);

// Number of accepted words counting multiplicities:
// sum over w in S of S(w) * [dfa accepts w].
long long count_accepted(const Dfa& dfa, const Sample& sample);

struct DotOptions {
    bool omit_self_loops = false;
};

// Graphviz rendering. Final states are double circles, the initial state
// is marked with an arrow from an invisible node, and parallel edges
// between the same pair of states are merged into one edge whose label
// lists the symbols in alphabet order.
std::string to_dot(const Dfa& dfa, const DotOptions& options = {});

// JSON round trip. Shape:
//   {"n": 2, "alphabet": ["a","b"], "initial": 0,
//    "transitions": [[0,"a",1], ...], "finals": [1]}
// Deserialization validates totality and state ranges.
std::string dfa_to_json(const Dfa& dfa);
Dfa dfa_from_json(const std::string& text);
void write_dfa_file(const Dfa& dfa, const std::filesystem::path& path);
Dfa read_dfa_file(const std::filesystem::path& path);

} // namespace dfalearn

#endif
