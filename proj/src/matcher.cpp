#include "sp/matcher.hpp"

namespace sp {

bool better(const HitSequence& a, const HitSequence& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.gaps != b.gaps) return a.gaps < b.gaps;
    return a.hits < b.hits;
}

namespace detail {

std::uint32_t gap_count(const HitNode& n, bool count_db_gaps) {
    std::uint32_t g = n.hit.query_pos - n.first_q + 1 - n.count;
    if (count_db_gaps) g += n.hit.db_pos - n.first_d + 1 - n.count;
    return g;
}

void purge_leaves(std::vector<HitNode>& nodes, double gap_penalty, bool count_db_gaps) {
    std::vector<std::size_t> leaves;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].children == 0) leaves.push_back(i);
    if (leaves.empty()) return;
    auto score = [&](std::size_t i) { return nodes[i].sum - gap_penalty * gap_count(nodes[i], count_db_gaps); };
    // Weakest first; among equals the most recent goes first.
    std::stable_sort(leaves.begin(), leaves.end(), [&](std::size_t a, std::size_t b) {
        double sa = score(a), sb = score(b);
        if (sa != sb) return sa < sb;
        return a > b;
    });
    std::vector<char> dead(nodes.size(), 0);
    const std::size_t drop = std::max<std::size_t>(1, leaves.size() / 2);
    for (std::size_t k = 0; k < drop; ++k) {
        auto n = static_cast<std::int32_t>(leaves[k]);
        dead[n] = 1;
        // Ancestors left without descendants go too.
        for (auto p = nodes[n].parent; p >= 0; p = nodes[p].parent) {
            if (--nodes[p].children > 0) break;
            dead[p] = 1;
        }
    }
    std::vector<std::int32_t> remap(nodes.size(), -1);
    std::size_t w = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (dead[i]) continue;
        remap[i] = static_cast<std::int32_t>(w);
        auto n = nodes[i];
        if (n.parent >= 0) n.parent = remap[n.parent];
        nodes[w++] = n;
    }
    nodes.resize(w);
}

}  // namespace detail

std::vector<HitSequence> find_hit_sequences(std::span<const SymbolId> query,
                                            std::span<const SymbolId> database,
                                            const CodeTable& table,
                                            const MatchParams& params) {
    auto cost = [&](SymbolId s) { return table.cost(s); };
    return detail::grow_hit_tree(query, database, cost, params, true,
                                 [](const std::vector<detail::HitNode>& nodes, std::int32_t parent, std::uint32_t d) {
                                     return nodes[parent].hit.db_pos < d;
                                 });
}

}  // namespace sp
