#include "sp/probability.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace sp {

AbsoluteProb absolute_probability(const ScoredAlignment& sa, ProbMode mode) {
    AbsoluteProb p;
    p.code_bits = sa.score.code_bits;
    p.unmatched_bits = sa.score.unmatched_bits;
    p.cost = mode == ProbMode::Lgen ? p.code_bits + p.unmatched_bits : p.code_bits;
    p.p_abs = std::exp2(-p.cost);
    return p;
}

ReferenceSet relative_probabilities(std::span<const ScoredAlignment> ranked, ProbMode mode) {
    if (ranked.empty()) throw std::invalid_argument("no alignments");
    ReferenceSet ref;
    ref.reference_positions = ranked.front().score.encoded_positions;
    std::vector<double> cost;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (mode == ProbMode::Strict && ranked[i].score.encoded_positions != ref.reference_positions) continue;
        auto a = absolute_probability(ranked[i], mode);
        ref.members.push_back(i);
        ref.p_abs.push_back(a.p_abs);
        cost.push_back(a.cost);
        ref.p_sum += a.p_abs;
    }
    // Normalise against the cheapest member so tiny absolute values do not underflow.
    double least = *std::min_element(cost.begin(), cost.end());
    double total = 0;
    for (double c : cost) total += std::exp2(least - c);
    for (double c : cost) ref.p_rel.push_back(std::exp2(least - c) / total);
    return ref;
}

EntityProbs entity_probabilities(std::span<const ScoredAlignment> ranked, const ReferenceSet& ref,
                                 const PatternStore& store) {
    EntityProbs out;
    std::set<SymbolId> observed;
    for (std::size_t k = 0; k < ref.members.size(); ++k) {
        const auto& a = ranked[ref.members[k]].alignment;
        std::set<std::size_t> patterns;
        std::set<SymbolId> symbols;
        for (const auto& row : a.rows()) {
            const auto& syms = store.at(row.pattern).symbols;
            if (row.is_new) {
                observed.insert(syms.begin(), syms.end());
                continue;
            }
            patterns.insert(row.pattern);
            symbols.insert(syms.begin(), syms.end());
        }
        for (auto p : patterns) out.patterns[p] += ref.p_rel[k];
        for (auto s : symbols) out.symbols[s] += ref.p_rel[k];
    }
    for (auto& [s, p] : out.symbols) p = std::min(p, 1.0);
    for (auto& [p, v] : out.patterns) v = std::min(v, 1.0);
    for (auto s : observed) out.symbols[s] = 1.0;
    return out;
}

}  // namespace sp
