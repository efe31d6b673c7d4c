#include <gtest/gtest.h>

#include <set>

#include "testkit.hpp"

using namespace sp;

namespace {

const PatternStore& parsing_store() {
    static const auto store = testkit::load("parsing.old", "parsing.new");
    return store;
}

const std::vector<ScoredAlignment>& parsing_alignments() {
    static const auto found = [] {
        const auto& store = parsing_store();
        auto table = CodeTable::build(store);
        return build_alignments(store, store.new_indices().front(), table);
    }();
    return found;
}

std::size_t find_pattern(const PatternStore& store, const std::string& text) {
    for (std::size_t i = 0; i < store.size(); ++i)
        if (store.text(i) == text) return i;
    throw std::runtime_error("no pattern " + text);
}

}  // namespace

TEST(Alignment, SeedHasOneColumnPerSymbol) {
    const auto& store = parsing_store();
    auto a = Alignment::seed(store, store.new_indices().front());
    EXPECT_EQ(a.rows().size(), 1u);
    EXPECT_EQ(a.column_count(), store.at(store.new_indices().front()).symbols.size());
    EXPECT_TRUE(a.rows().front().is_new);
}

TEST(Alignment, InvariantsOfSearchResults) {
    const auto& store = parsing_store();
    for (const auto& s : parsing_alignments()) {
        const auto& a = s.alignment;
        for (std::size_t c = 0; c < a.column_count(); ++c) {
            const auto& cells = a.cells(c);
            ASSERT_FALSE(cells.empty());
            EXPECT_LE(cells.size(), 2u);
            for (const auto& cell : cells)
                EXPECT_EQ(store.at(a.rows()[cell.row].pattern).symbols[cell.pos], a.symbol(c));
            // Old rows meet only on ID symbols.
            if (cells.size() == 2 && a.has_old_cell(c) && !a.has_new_cell(c))
                EXPECT_TRUE(store.symbols().is_id(a.symbol(c)));
        }
        for (const auto& r : a.rows()) {
            EXPECT_EQ(r.columns.size(), store.at(r.pattern).symbols.size());
            for (std::size_t i = 1; i < r.columns.size(); ++i) EXPECT_LT(r.columns[i - 1], r.columns[i]);
        }
        EXPECT_TRUE(evidence_supported(a));
    }
}

TEST(Alignment, FromRowsGivesSameKey) {
    for (const auto& s : parsing_alignments()) {
        auto rebuilt = Alignment::from_rows(parsing_store(), s.alignment.rows());
        ASSERT_TRUE(rebuilt.has_value());
        EXPECT_EQ(canonical_key(*rebuilt), s.key);
    }
}

TEST(Alignment, FlattenExpandRoundTrip) {
    for (const auto& s : parsing_alignments()) {
        auto flat = flatten(s.alignment);
        EXPECT_EQ(flat.symbols.size(), s.alignment.column_count());
        auto back = expand(parsing_store(), flat);
        ASSERT_TRUE(back.has_value());
        EXPECT_EQ(canonical_key(*back), s.key);
    }
}

TEST(Alignment, RejectsHitOnFullColumn) {
    const auto& store = parsing_store();
    auto seed = Alignment::seed(store, store.new_indices().front());
    const auto d1 = find_pattern(store, "D 1 t h a t #D");
    // "t h a t" starts at New position 12.
    auto one = seed.extend(store, d1, std::vector<Hit>{{2, 12}, {3, 13}, {4, 14}, {5, 15}});
    ASSERT_TRUE(one.has_value());
    const auto t_col = one->rows()[1].columns[2];
    const auto d0 = find_pattern(store, "D 0 t h i s #D");
    EXPECT_FALSE(one->extend(store, d0, std::vector<Hit>{{2, t_col}}).has_value());
}

TEST(Alignment, OldRowsMeetOnlyOnIds) {
    const auto& store = parsing_store();
    auto seed = Alignment::seed(store, store.new_indices().front());
    const auto d1 = find_pattern(store, "D 1 t h a t #D");
    auto one = seed.extend(store, d1, std::vector<Hit>{{2, 12}, {3, 13}});
    ASSERT_TRUE(one.has_value());
    // 'a' of "t h a t" is an Old-only CONTENTS cell.
    const auto a_col = one->rows()[1].columns[4];
    const auto v1 = find_pattern(store, "V 1 h a t e s #V");
    EXPECT_FALSE(one->extend(store, v1, std::vector<Hit>{{3, a_col}}).has_value());
}

TEST(Alignment, NoSelfUnificationInPlace) {
    const auto& store = parsing_store();
    auto seed = Alignment::seed(store, store.new_indices().front());
    const auto d1 = find_pattern(store, "D 1 t h a t #D");
    auto one = seed.extend(store, d1, std::vector<Hit>{{2, 12}});
    ASSERT_TRUE(one.has_value());
    const auto head = one->rows()[1].columns[0];
    EXPECT_FALSE(one->extend(store, d1, std::vector<Hit>{{0, head}}).has_value());
}

TEST(Alignment, ScoreMatchesHandSum) {
    const auto& store = parsing_store();
    auto table = CodeTable::build(store);
    const auto& best = parsing_alignments().front();
    const auto& syms = store.at(store.new_indices().front()).symbols;
    double b_n = 0;
    for (auto p : best.score.encoded_positions) b_n += table.cost(syms[p]);
    double b_e = 0;
    for (auto s : best.score.code) b_e += table.cost(s);
    EXPECT_NEAR(best.score.encoded_bits, b_n, 1e-9);
    EXPECT_NEAR(best.score.code_bits, b_e, 1e-9);
    EXPECT_NEAR(best.score.cd, b_n - b_e, 1e-9);
    EXPECT_EQ(join(best.score.code, store.symbols()), "S 0 1 0 1 0 #S");
}

TEST(Alignment, ContentsReadInColumnOrder) {
    const auto& store = parsing_store();
    const auto& best = parsing_alignments().front();
    EXPECT_EQ(join(contents_sequence(best.alignment, store), store.symbols()), "t h i s b o y l o v e s t h a t g i r l");
}
