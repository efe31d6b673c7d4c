#include "sp/code_table.hpp"

#include <cmath>
#include <stdexcept>

namespace sp {

CodeTable CodeTable::build(const PatternStore& store, CostModel model) {
    CodeTable t;
    t.model_ = model;
    t.freq_.assign(store.symbols().size(), 0);
    bool any_old = false;
    for (const auto& p : store.patterns()) {
        if (p.role != Role::Old) continue;
        any_old = true;
        for (auto s : p.symbols) t.freq_[s] += p.frequency;
    }
    if (!any_old) throw std::invalid_argument("no Old patterns");
    for (const auto& p : store.patterns())
        if (p.role == Role::New)
            for (auto s : p.symbols)
                if (t.freq_[s] == 0) t.freq_[s] = 1;

    for (auto f : t.freq_) {
        t.total_ += f;
        if (f > 0) ++t.types_;
    }
    t.cost_.assign(t.freq_.size(), 0.0);
    const double total = static_cast<double>(t.total_);
    for (std::size_t s = 0; s < t.freq_.size(); ++s) {
        if (t.freq_[s] == 0) continue;
        double bits = -std::log2(static_cast<double>(t.freq_[s]) / total);
        if (bits < 0) bits = 0;
        t.cost_[s] = model == CostModel::Fractional ? bits : std::ceil(bits) + 1.0;
    }
    return t;
}

double CodeTable::cost(SymbolId id) const {
    if (!has(id)) throw std::out_of_range("symbol has no code");
    return cost_[id];
}

double CodeTable::kraft_sum() const {
    double k = 0;
    for (std::size_t s = 0; s < freq_.size(); ++s)
        if (freq_[s] > 0) k += std::exp2(-cost_[s]);
    return k;
}

double CodeTable::sum(std::span<const SymbolId> symbols) const {
    double bits = 0;
    for (auto s : symbols) bits += cost(s);
    return bits;
}

}  // namespace sp
