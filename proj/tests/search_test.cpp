#include <gtest/gtest.h>

#include <random>

#include "testkit.hpp"

using namespace sp;

namespace {

std::vector<std::string> keys(const std::vector<ScoredAlignment>& found) {
    std::vector<std::string> out;
    for (const auto& s : found) out.push_back(s.key);
    return out;
}

}  // namespace

TEST(Search, RankedBestFirst) {
    auto store = testkit::load("parsing.old", "parsing.new");
    auto table = CodeTable::build(store);
    auto found = build_alignments(store, store.new_indices().front(), table);
    ASSERT_FALSE(found.empty());
    for (std::size_t i = 1; i < found.size(); ++i) EXPECT_FALSE(ranks_before(found[i], found[i - 1], store.symbols()));
}

TEST(Search, RepeatRunsAgree) {
    auto store = testkit::load("noisy.old", "noisy.new");
    auto table = CodeTable::build(store);
    auto a = build_alignments(store, store.new_indices().front(), table);
    auto b = build_alignments(store, store.new_indices().front(), table);
    EXPECT_EQ(keys(a), keys(b));
}

TEST(Search, SerialMatchesParallel) {
    for (auto [old_name, new_name] : {std::pair{"parsing.old", "parsing.new"}, {"noisy.old", "noisy.new"},
                                       {"circuit.old", "circuit.new"}}) {
        auto store = testkit::load(old_name, new_name);
        auto table = CodeTable::build(store);
        SearchParams p;
        auto par = build_alignments(store, store.new_indices().front(), table, p);
        p.parallel = false;
        auto ser = build_alignments(store, store.new_indices().front(), table, p);
        EXPECT_EQ(keys(par), keys(ser)) << new_name;
        ASSERT_EQ(par.size(), ser.size());
        for (std::size_t i = 0; i < par.size(); ++i) EXPECT_EQ(par[i].score.cd, ser[i].score.cd);
    }
}

TEST(Search, NothingWithoutOldPatterns) {
    auto store = parse_store("q r\n", "a b\n");
    auto table = CodeTable::build(store);
    EXPECT_TRUE(build_alignments(store, store.new_indices().front(), table).empty());
}

TEST(Production, ReadsSentenceBackFromCode) {
    auto store = parse_store(read_file(testkit::fixture("parsing.old")), "S 0 1 0 1 0 #S\n");
    auto table = CodeTable::build(store);
    auto p = produce(store, store.new_indices().front(), table);
    EXPECT_EQ(join(p.surface, store.symbols()), "t h i s b o y l o v e s t h a t g i r l");
}

TEST(Production, RoundTripOnRandomGrammars) {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        auto rc = testkit::random_round_trip_case(rng);
        std::string want;
        for (const auto& w : rc.sentence) want += (want.empty() ? "" : " ") + w;
        EXPECT_EQ(testkit::encode_then_produce(rc.store), want) << "trial " << trial << "\n"
                                                                << serialize(rc.store, Role::Old);
    }
}
