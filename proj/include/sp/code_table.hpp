#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sp/pattern.hpp"

namespace sp {

enum class CostModel : std::uint8_t { Fractional, SfeInteger };

// Per-type code sizes in bits. Frequency of a type is the sum over Old
// patterns of pattern frequency times occurrences; types seen only in New
// patterns get frequency 1.
class CodeTable {
public:
    static CodeTable build(const PatternStore& store, CostModel model = CostModel::Fractional);

    bool has(SymbolId id) const { return id < freq_.size() && freq_[id] > 0; }
    double cost(SymbolId id) const;
    std::uint64_t frequency(SymbolId id) const { return id < freq_.size() ? freq_[id] : 0; }
    std::uint64_t total_frequency() const { return total_; }
    std::size_t type_count() const { return types_; }
    CostModel model() const { return model_; }
    double kraft_sum() const;

    double sum(std::span<const SymbolId> symbols) const;

private:
    std::vector<std::uint64_t> freq_;
    std::vector<double> cost_;
    std::uint64_t total_ = 0;
    std::size_t types_ = 0;
    CostModel model_ = CostModel::Fractional;
};

}  // namespace sp
