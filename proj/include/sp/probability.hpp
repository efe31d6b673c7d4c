#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "sp/search.hpp"

namespace sp {

enum class ProbMode { Strict, Lgen };

struct AbsoluteProb {
    double code_bits = 0;       // L
    double unmatched_bits = 0;  // cost of New symbols left out
    double cost = 0;            // L, or L plus the unmatched bits under Lgen
    double p_abs = 1;
};

AbsoluteProb absolute_probability(const ScoredAlignment& sa, ProbMode mode);

struct ReferenceSet {
    std::vector<std::size_t> members;  // indices into the ranked list
    std::vector<double> p_abs;
    std::vector<double> p_rel;
    double p_sum = 0;
    std::vector<std::uint32_t> reference_positions;  // New positions encoded by the top alignment
};

// Strict: the alignments encoding exactly the New positions of the first
// one. Lgen: every alignment. Throws std::invalid_argument on empty input.
ReferenceSet relative_probabilities(std::span<const ScoredAlignment> ranked, ProbMode mode);

struct EntityProbs {
    std::map<std::size_t, double> patterns;  // Old pattern index
    std::map<SymbolId, double> symbols;
};

// A pattern scores the p_REL of every member holding it. A symbol type
// scores the p_REL of every member whose Old rows hold it, once per
// member; types in the New pattern score 1.
EntityProbs entity_probabilities(std::span<const ScoredAlignment> ranked, const ReferenceSet& ref,
                                 const PatternStore& store);

}  // namespace sp
