#include <gtest/gtest.h>

#include <filesystem>

#include "testkit.hpp"

using namespace sp;

TEST(SymbolTable, InternsOnce) {
    SymbolTable t;
    auto a = t.intern("a");
    EXPECT_EQ(t.intern("a"), a);
    EXPECT_NE(t.intern("b"), a);
    EXPECT_EQ(t.find("b"), SymbolId{1});
    EXPECT_FALSE(t.find("zzz").has_value());
    EXPECT_EQ(t.name(a), "a");
}

TEST(Parse, FrequenciesAndRoles) {
    auto store = parse_store("A x y (12)\nB z\n", "x z\n");
    ASSERT_EQ(store.size(), 3u);
    EXPECT_EQ(store.at(0).frequency, 12u);
    EXPECT_TRUE(store.at(0).explicit_frequency);
    EXPECT_EQ(store.at(1).frequency, 1u);
    EXPECT_EQ(store.at(2).role, Role::New);
    EXPECT_EQ(store.old_indices(), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(store.new_indices(), (std::vector<std::size_t>{2}));
}

TEST(Parse, DefaultIdClassification) {
    auto store = parse_store("N 0 1 b o y #N\n", "b o y\n");
    const auto& t = store.symbols();
    for (const char* id : {"N", "0", "1", "#N"}) EXPECT_TRUE(t.is_id(*t.find(id))) << id;
    for (const char* c : {"b", "o", "y"}) EXPECT_FALSE(t.is_id(*t.find(c))) << c;
}

TEST(Parse, IdDirectiveReplacesDefaults) {
    auto store = parse_store("%id X* 7\nN x1 7 q\n", "");
    const auto& t = store.symbols();
    EXPECT_FALSE(t.is_id(*t.find("N")));
    EXPECT_TRUE(t.is_id(*t.find("7")));
    EXPECT_FALSE(t.is_id(*t.find("x1")));
    EXPECT_FALSE(t.is_id(*t.find("q")));
}

TEST(Parse, ErrorsCarryLineNumbers) {
    auto line_of = [](const char* text) {
        try {
            parse_store(text, "");
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    EXPECT_EQ(line_of("a b\n\nc (x)\n"), 3u);
    EXPECT_EQ(line_of("a (0)\n"), 1u);
    EXPECT_EQ(line_of("a\n(3)\n"), 2u);
    EXPECT_EQ(line_of("%id a\n%id a\n"), 2u);
    EXPECT_EQ(line_of("%ids a\n"), 1u);
    EXPECT_EQ(line_of("%id\n"), 1u);
}

TEST(Serialize, RoundTripsEveryFixture) {
    for (const auto& entry : std::filesystem::directory_iterator(SP_FIXTURE_DIR)) {
        if (entry.path().extension() != ".old") continue;
        auto text = read_file(entry.path().string());
        auto store = parse_store(text, "");
        auto once = serialize(store, Role::Old);
        auto again = serialize(parse_store(once, ""), Role::Old);
        EXPECT_EQ(once, again) << entry.path();
        EXPECT_EQ(parse_store(once, "").size(), store.size()) << entry.path();
    }
}

TEST(Serialize, KeepsSpelledOutFrequencies) {
    auto store = parse_store("a b (1)\nc d\ne f (3)\n", "");
    EXPECT_EQ(serialize(store, Role::Old), "a b (1)\nc d\ne f (3)\n");
}
