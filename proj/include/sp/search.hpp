#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sp/alignment.hpp"

namespace sp {

struct SearchParams {
    std::size_t beam_driving = 20;    // alignments driven per stage
    std::size_t beam_target = 200;    // new alignments kept per stage
    std::size_t max_alignments = 100; // alignments reported
    std::size_t budget = 1'000'000;   // hit-tree node budget per match
    std::size_t max_sequences = 16;   // hit sequences tried per driver/target pair
    std::size_t max_stages = 64;
    double gap_penalty = 0.1;
    bool parallel = true;
};

struct ScoredAlignment {
    Alignment alignment;
    AlignmentScore score;
    std::string key;
};

// CD descending, then fewer rows, then fewer separate runs of matched New
// symbols, then the code spelled out.
bool ranks_before(const ScoredAlignment& a, const ScoredAlignment& b, const SymbolTable& symbols);

struct SearchStats {
    std::size_t stages = 0;
    std::size_t formed = 0;
};

// Grows alignments for one New pattern stage by stage. Every alignment
// formed so far waits in a pool; each stage takes the best beam_driving of
// those not yet driven and matches them against every Old pattern, keeping
// at most beam_target new ones. Stops when every alignment has driven or
// after max_stages. Reported alignments match at least one New symbol and
// pass evidence_supported.
std::vector<ScoredAlignment> build_alignments(const PatternStore& store, std::size_t new_index,
                                              const CodeTable& table, const SearchParams& params = {},
                                              SearchStats* stats = nullptr);

// Extensions of one driver by one Old pattern.
std::vector<Alignment> extensions(const Alignment& driver, const PatternStore& store, std::size_t pattern,
                                  const CodeTable& table, const SearchParams& params);

struct Production {
    std::vector<ScoredAlignment> alignments;
    std::vector<SymbolId> surface;  // CONTENTS symbols of the best alignment
};

// Treats `code` as New and reads the CONTENTS symbols back out.
Production produce(const PatternStore& store, std::size_t code_index, const CodeTable& table,
                   const SearchParams& params = {});

std::string join(const std::vector<SymbolId>& symbols, const SymbolTable& table);

}  // namespace sp
