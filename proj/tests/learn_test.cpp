#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "testkit.hpp"

using namespace sp;

namespace {

using Counts = std::map<std::string, double>;

// Code sizes straight from counts: -log2(f / total).
double bits(const Counts& f, const std::string& s) {
    double total = 0;
    for (const auto& [k, v] : f) total += v;
    return -std::log2(f.at(s) / total);
}

struct Weighted {
    std::string text;
    double frequency;
};

// T of a grammar whose best parse of sentence i has code codes[i].
double oracle_t(const std::vector<Weighted>& grammar, const std::vector<std::string>& codes) {
    Counts f;
    for (const auto& p : grammar)
        for (const auto& w : testkit::words(p.text)) f[w] += p.frequency;
    double g = 0;
    for (const auto& p : grammar)
        for (const auto& w : testkit::words(p.text)) g += bits(f, w);
    double e = 0;
    for (const auto& c : codes)
        for (const auto& w : testkit::words(c)) e += bits(f, w);
    return g + e;
}

const std::string kFirst = "t h a t b o y r u n s";
const std::string kSecond = "t h a t g i r l r u n s";

std::string texts(const std::vector<Pattern>& ps, const SymbolTable& t) {
    std::string out;
    for (const auto& p : ps) {
        out += join(p.symbols, t);
        out += " (" + std::to_string(p.frequency) + ")\n";
    }
    return out;
}

}  // namespace

TEST(Namer, LettersThenNumbered) {
    Namer n;
    for (char c = 'A'; c <= 'Z'; ++c) EXPECT_EQ(n.next_class(), std::string(1, c));
    EXPECT_EQ(n.next_class(), "P1");
    EXPECT_EQ(n.next_class(), "P2");
}

TEST(Namer, SkipsTakenNames) {
    Namer n({"A", "#B", "C"});
    EXPECT_EQ(n.next_class(), "D");
    EXPECT_EQ(n.next_class(), "E");
}

TEST(Namer, DiscriminatorsPerClass) {
    Namer n;
    EXPECT_EQ(n.next_discriminator("X"), "0");
    EXPECT_EQ(n.next_discriminator("X"), "1");
    EXPECT_EQ(n.next_discriminator("Y"), "0");
}

TEST(Derive, TwoSentenceSplit) {
    auto store = parse_store("A 0 " + kFirst + " #A\n", kSecond + "\n");
    auto table = CodeTable::build(store);
    auto found = build_alignments(store, store.new_indices().front(), table);
    const Alignment* two_row = nullptr;
    for (const auto& s : found)
        if (s.alignment.rows().size() == 2) {
            two_row = &s.alignment;
            break;
        }
    ASSERT_NE(two_row, nullptr);
    std::set<std::string> taken;
    for (SymbolId s = 0; s < store.symbols().size(); ++s) taken.insert(store.symbols().name(s));
    Namer namer(taken);
    auto d = derive_patterns(*two_row, store, namer);
    const auto& t = store.symbols();
    EXPECT_EQ(texts(d.chunks, t), "B 0 t h a t #B (2)\nD 0 r u n s #D (2)\n");
    EXPECT_EQ(texts(d.variants, t), "C 0 b o y #C (1)\nC 1 g i r l #C (1)\n");
    EXPECT_EQ(texts(d.abstracts, t), "E 0 B #B C #C D #D #E (2)\n");
    EXPECT_TRUE(d.reused.empty());
    for (const auto& p : d.all())
        for (auto s : {p.symbols[0], p.symbols[1], p.symbols.back()}) EXPECT_TRUE(t.is_id(s));
}

TEST(Derive, WholeMatchReusesOld) {
    auto store = parse_store("A 0 x y #A\n", "p x y q\n");
    auto table = CodeTable::build(store);
    auto found = build_alignments(store, store.new_indices().front(), table);
    ASSERT_FALSE(found.empty());
    Namer namer({"A", "p", "q", "x", "y"});
    auto d = derive_patterns(found.front().alignment, store, namer);
    EXPECT_EQ(d.reused, (std::vector<std::size_t>{0}));
    EXPECT_TRUE(d.chunks.empty());
    // One-sided gaps: "p" and "q" each become a class of their own.
    EXPECT_EQ(texts(d.variants, store.symbols()), "B 0 p #B (1)\nC 0 q #C (1)\n");
    EXPECT_EQ(texts(d.abstracts, store.symbols()), "D 0 B #B A #A C #C #D (1)\n");
}

TEST(Derive, RejectsWrongShapes) {
    auto store = parse_store("A 0 x y #A\nB 0 #B\n", "x y\n");
    auto seed = Alignment::seed(store, store.new_indices().front());
    Namer namer;
    EXPECT_THROW(derive_patterns(seed, store, namer), std::invalid_argument);
}

TEST(Copy, WrapsSymbols) {
    SymbolTable t;
    std::vector<SymbolId> body{t.intern("x"), t.intern("y")};
    Namer namer;
    auto p = copy_pattern(body, t, namer);
    EXPECT_EQ(join(p.symbols, t), "A 0 x y #A");
    EXPECT_TRUE(t.is_id(p.symbols.front()));
}

TEST(GrammarCosts, NullGrammarCostsRawBits) {
    auto corpus = parse_store("", kFirst + "\n" + kSecond + "\n");
    auto res = search_grammars(corpus);
    std::vector<Pattern> news;
    for (auto i : corpus.new_indices()) news.push_back(corpus.at(i));
    auto c = grammar_costs({}, news, res.raw_bits, res.symbols, {});
    EXPECT_EQ(c.G, 0.0);
    EXPECT_NEAR(c.T, res.raw_bits[0] + res.raw_bits[1], 1e-12);
    // Raw bits: each sentence once, letter costs from the pair.
    Counts f;
    for (const auto& s : {kFirst, kSecond})
        for (const auto& w : testkit::words(s)) f[w] += 1;
    double o = 0;
    for (const auto& s : {kFirst, kSecond})
        for (const auto& w : testkit::words(s)) o += bits(f, w);
    EXPECT_NEAR(c.T, o, 1e-9);
    EXPECT_NEAR(o, 81.287037, 1e-6);
}

TEST(Search, TwoSentenceGrammars) {
    auto corpus = parse_store("", kFirst + "\n" + kSecond + "\n");
    auto res = search_grammars(corpus);
    ASSERT_FALSE(res.grammars.empty());
    for (std::size_t i = 1; i < res.grammars.size(); ++i) EXPECT_LE(res.grammars[i - 1].T, res.grammars[i].T);

    const double copies = oracle_t({{"A 0 " + kFirst + " #A", 1}, {"B 0 " + kSecond + " #B", 1}},
                                   {"A 0 #A", "B 0 #B"});
    const double learned = oracle_t({{"B 0 t h a t #B", 2},
                                     {"C 0 b o y #C", 1},
                                     {"C 1 g i r l #C", 1},
                                     {"D 0 r u n s #D", 2},
                                     {"E 0 B #B C #C D #D #E", 2}},
                                    {"E 0 0 0 0 #E", "E 0 0 1 0 #E"});
    EXPECT_NEAR(copies, 143.274447, 1e-6);
    EXPECT_NEAR(learned, 205.316037, 1e-6);

    bool saw_copies = false, saw_learned = false;
    for (const auto& g : res.grammars) {
        if (g.patterns.size() == 2 && std::abs(g.T - copies) < 1e-6) saw_copies = true;
        if (g.patterns.size() == 5 && std::abs(g.T - learned) < 1e-6) saw_learned = true;
    }
    EXPECT_TRUE(saw_copies);
    EXPECT_TRUE(saw_learned);
}

TEST(Search, MetricsCsv) {
    auto corpus = parse_store("", kFirst + "\n" + kSecond + "\n");
    auto res = search_grammars(corpus);
    ASSERT_EQ(res.metrics.size(), 2u);
    EXPECT_EQ(res.metrics[1].i, 2u);
    EXPECT_NEAR(res.metrics[1].T, res.grammars.front().T, 1e-12);
    std::ostringstream out;
    write_metrics_csv(out, res.metrics);
    auto text = out.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "i,O,G,E,T,T_over_O");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

TEST(Search, EmptyCorpusThrows) {
    PatternStore corpus;
    EXPECT_THROW(search_grammars(corpus), std::invalid_argument);
}

TEST(GrammarText, FrequenciesOnlyWhenNotOne) {
    SymbolTable t;
    Grammar g;
    Pattern a;
    a.symbols = {t.intern("A"), t.intern("x"), t.intern("#A")};
    Pattern b = a;
    b.frequency = 3;
    g.patterns = {a, b};
    EXPECT_EQ(grammar_text(g, t), "A x #A\nA x #A (3)\n");
}
