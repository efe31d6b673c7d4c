#pragma once

#include <random>
#include <string>
#include <vector>

#include "sp/learn.hpp"
#include "sp/probability.hpp"
#include "sp/render.hpp"
#include "sp/search.hpp"

namespace sp::testkit {

std::string fixture(const std::string& name);
std::string golden(const std::string& name);

// Old file plus New file, both under tests/fixtures.
PatternStore load(const std::string& old_name, const std::string& new_name);

// Every ordered chain of equal-symbol hits, scored the way the matcher
// scores them, in `better` order.
std::vector<HitSequence> brute_force_matches(std::span<const SymbolId> query, std::span<const SymbolId> db,
                                             const CodeTable& table, double gap_penalty);

// Table over symbols a, b, c with distinct costs; ids 0, 1, 2 in that order.
PatternStore three_symbol_store();

// Compares the matcher against the enumeration for every pair of sequences
// up to `max_len` over a, b, c. Returns the first mismatch, or "".
std::string matcher_mismatch(std::size_t max_len);

// A small class grammar "S C0 #C0 C1 #C1 ... #S" with words spelled in
// tokens no other word uses, and one sentence drawn from it as New.
struct RoundTripCase {
    PatternStore store;
    std::vector<std::string> sentence;
};
RoundTripCase random_round_trip_case(std::mt19937& rng);

// Encodes the New pattern by its best full parse, produces from that code, and returns the
// surface read back ("" when nothing aligned).
std::string encode_then_produce(const PatternStore& store, const SearchParams& params = {});

// Alignments differing only in their scores; all encode the same positions.
std::vector<ScoredAlignment> random_reference_set(std::mt19937& rng);

std::vector<std::string> words(const std::string& line);

}  // namespace sp::testkit
