#include "doctest.h"

#include "test_helpers.hpp"

using namespace dfalearn;

TEST_CASE("prefix tree has one node per distinct prefix") {
    // Pref = {eps, a, aa}: three nodes no matter how often words repeat.
    const Sample s = testutil::make_sample({{"a", 3}, {"a a", 1}});
    const PrefixTree tree = PrefixTree::build(s);
    CHECK(tree.node_count() == 3);
    CHECK(size_upper_bound(tree) == 4);
}

TEST_CASE("node ids are breadth first with siblings in symbol order") {
    const Sample s = testutil::make_sample({{"a b", 1}, {"b", 1}, {"a a", 1}});
    const PrefixTree tree = PrefixTree::build(s);
    CHECK(tree.node_count() == 5);
    CHECK(tree.node_of({}) == 0);
    CHECK(tree.node_of({"a"}) == 1);
    CHECK(tree.node_of({"b"}) == 2);
    CHECK(tree.node_of({"a", "a"}) == 3);
    CHECK(tree.node_of({"a", "b"}) == 4);
    CHECK(tree.node_of({"b", "b"}) == -1);
    CHECK(tree.child(1, 0) == 3);
    CHECK(tree.child(1, 1) == 4);
    CHECK(tree.child(2, 0) == -1);
}

TEST_CASE("parent, symbol and depth agree with the spelled prefix") {
    const Sample s = testutil::make_sample({{"b a b", 1}, {"a", 2}, {"b b", 1}});
    const PrefixTree tree = PrefixTree::build(s);
    for (int v = 1; v < tree.node_count(); ++v) {
        Word expected = tree.prefix_of(tree.parent(v));
        expected.push_back(tree.alphabet()[static_cast<std::size_t>(tree.incoming_symbol(v))]);
        CHECK(tree.prefix_of(v) == expected);
        CHECK(tree.depth(v) == static_cast<int>(expected.size()));
        CHECK(tree.depth(v) == tree.depth(tree.parent(v)) + 1);
    }
    CHECK(tree.prefix_of(0) == Word{});
    CHECK(tree.depth(0) == 0);
}

TEST_CASE("a sample of only the empty word still has a root") {
    const Sample s = testutil::make_sample({{"", 4}});
    const PrefixTree tree = PrefixTree::build(s);
    CHECK(tree.node_count() == 1);
    CHECK(tree.alphabet().empty());
    CHECK(size_upper_bound(tree) == 2);
}

TEST_CASE("an empty sample is rejected") {
    CHECK_THROWS_AS(PrefixTree::build(Sample{}), InputError);
}
