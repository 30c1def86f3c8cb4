#include "dfalearn/prefix_tree.hpp"

#include <algorithm>
#include <map>

namespace dfalearn {

PrefixTree PrefixTree::build(const Sample& sample) {
    if (sample.empty()) throw InputError("cannot build a prefix tree from an empty sample");

    PrefixTree tree;
    tree.alphabet_ = sample.alphabet();
    const int asize = static_cast<int>(tree.alphabet_.size());
    std::map<Symbol, int> symbol_idx;
    for (int a = 0; a < asize; ++a) symbol_idx[tree.alphabet_[static_cast<std::size_t>(a)]] = a;

    // Collect every prefix, then number nodes breadth first: all prefixes
    // of length 0, then 1, ... with siblings in symbol order. Sorting the
    // symbol-index sequences lexicographically within one length gives
    // exactly that order.
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> prefixes;
    for (const auto& [w, count] : sample.entries()) {
        (void)count;
        std::vector<int> encoded;
        encoded.reserve(w.size());
        if (ids.emplace(encoded, 0).second) prefixes.push_back(encoded);
        for (const Symbol& s : w) {
            encoded.push_back(symbol_idx.at(s));
            if (ids.emplace(encoded, 0).second) prefixes.push_back(encoded);
        }
    }
    std::sort(prefixes.begin(), prefixes.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    for (std::size_t i = 0; i < prefixes.size(); ++i) ids[prefixes[i]] = static_cast<int>(i);

    const int p = static_cast<int>(prefixes.size());
    tree.parent_.assign(static_cast<std::size_t>(p), -1);
    tree.in_symbol_.assign(static_cast<std::size_t>(p), -1);
    tree.depth_.assign(static_cast<std::size_t>(p), 0);
    tree.children_.assign(static_cast<std::size_t>(p), std::vector<int>(static_cast<std::size_t>(asize), -1));
    for (int i = 0; i < p; ++i) {
        const auto& pre = prefixes[static_cast<std::size_t>(i)];
        tree.depth_[static_cast<std::size_t>(i)] = static_cast<int>(pre.size());
        if (pre.empty()) continue;
        std::vector<int> parent_pre(pre.begin(), pre.end() - 1);
        const int parent = ids.at(parent_pre);
        tree.parent_[static_cast<std::size_t>(i)] = parent;
        tree.in_symbol_[static_cast<std::size_t>(i)] = pre.back();
        tree.children_[static_cast<std::size_t>(parent)][static_cast<std::size_t>(pre.back())] = i;
    }
    return tree;
}

int PrefixTree::child(int node, int symbol_idx) const {
    return children_.at(static_cast<std::size_t>(node)).at(static_cast<std::size_t>(symbol_idx));
}

int PrefixTree::node_of(const Word& w) const {
    int node = root();
    for (const Symbol& s : w) {
        auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), s);
        if (it == alphabet_.end() || *it != s) return -1;
        node = child(node, static_cast<int>(it - alphabet_.begin()));
        if (node < 0) return -1;
    }
    return node;
}

Word PrefixTree::prefix_of(int node) const {
    Word out;
    for (int cur = node; cur != root(); cur = parent(cur)) {
        out.push_back(alphabet_.at(static_cast<std::size_t>(incoming_symbol(cur))));
    }
    std::reverse(out.begin(), out.end());
    return out;
}

int size_upper_bound(const PrefixTree& tree) { return tree.node_count() + 1; }

} // namespace dfalearn
