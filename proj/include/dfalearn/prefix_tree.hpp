#ifndef DFALEARN_PREFIX_TREE_HPP
#define DFALEARN_PREFIX_TREE_HPP

#include <string>
#include <vector>

#include "dfalearn/automata.hpp"

namespace dfalearn {

// The prefix tree of a sample: one node per distinct prefix of a sample
// word, including the root for the empty word. Node ids are canonical:
// breadth first by prefix length, siblings ordered by symbol, so id 0 is
// always the root and ids are stable across runs for the same sample.
// Encoder variable names are derived from these ids.
class PrefixTree {
public:
    // Throws InputError on an empty sample (no words at all).
    static PrefixTree build(const Sample& sample);

    int node_count() const { return static_cast<int>(parent_.size()); }
    static constexpr int root() { return 0; }

    // Alphabet of the underlying sample (sorted, may be empty when the
    // sample consists solely of empty words).
    const std::vector<Symbol>& alphabet() const { return alphabet_; }

    int parent(int node) const { return parent_.at(static_cast<std::size_t>(node)); }
    // Symbol index (into alphabet()) on the edge from parent(node) to node.
    // Meaningless for the root.
    int incoming_symbol(int node) const { return in_symbol_.at(static_cast<std::size_t>(node)); }
    // Child of `node` along symbol index `a`, or -1 when that prefix does
    // not occur in the sample.
    int child(int node, int symbol_idx) const;

    // Node for the given word, or -1 when it is not a prefix of any sample
    // word.
    int node_of(const Word& w) const;
    // The prefix word spelled by the path from the root to `node`.
    Word prefix_of(int node) const;

    // Depth of the node (= length of its prefix).
    int depth(int node) const { return depth_.at(static_cast<std::size_t>(node)); }

private:
    PrefixTree() = default;

    std::vector<Symbol> alphabet_;
    std::vector<int> parent_;
    std::vector<int> in_symbol_;
    std::vector<int> depth_;
    std::vector<std::vector<int>> children_; // indexed [node][symbol_idx]
};

// Every target language consistent with the sample has a DFA no larger
// than the prefix tree plus one extra state, so the search over automaton
// sizes can stop at this value.
int size_upper_bound(const PrefixTree& tree);

} // namespace dfalearn

#endif
