#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sp/code_table.hpp"

namespace sp {

struct Hit {
    std::uint32_t query_pos = 0;
    std::uint32_t db_pos = 0;
    auto operator<=>(const Hit&) const = default;
};

struct HitSequence {
    std::vector<Hit> hits;  // ascending query_pos
    double score = 0;
    std::uint32_t gaps = 0;
};

struct MatchParams {
    std::size_t node_budget = 1'000'000;
    std::size_t max_sequences = 16;
    double gap_penalty = 0.1;
};

// Best-first order: score, then fewer gaps, then earliest hits.
bool better(const HitSequence& a, const HitSequence& b);

// Ordered partial matches between two sequences, found by growing a tree
// of hits: each query symbol is broadcast against the database and every
// hit extends every earlier node it can follow. When the tree would pass
// the node budget, the weaker half of its leaves is dropped.
std::vector<HitSequence> find_hit_sequences(std::span<const SymbolId> query,
                                            std::span<const SymbolId> database,
                                            const CodeTable& table,
                                            const MatchParams& params = {});

namespace detail {

struct HitNode {
    std::int32_t parent;  // -1 for children of the root
    Hit hit;
    double sum;
    std::uint32_t count;
    std::uint32_t first_q;
    std::uint32_t first_d;
    std::uint32_t children = 0;
};

void purge_leaves(std::vector<HitNode>& nodes, double gap_penalty, bool count_db_gaps);
std::uint32_t gap_count(const HitNode& n, bool count_db_gaps);

// Shared engine. `admit(nodes, parent, db_pos)` decides whether a hit at
// db_pos may follow the path ending at `parent`.
template <class Admit>
std::vector<HitSequence> grow_hit_tree(std::span<const SymbolId> query,
                                       std::span<const SymbolId> database,
                                       const std::function<double(SymbolId)>& cost,
                                       const MatchParams& params,
                                       bool count_db_gaps,
                                       Admit&& admit) {
    std::unordered_map<SymbolId, std::vector<std::uint32_t>> where;
    for (std::uint32_t d = 0; d < database.size(); ++d) where[database[d]].push_back(d);

    std::vector<HitNode> nodes;
    for (std::uint32_t q = 0; q < query.size(); ++q) {
        auto it = where.find(query[q]);
        if (it == where.end()) continue;
        const auto& matches = it->second;
        const double c = cost(query[q]);

        auto pending = [&] {
            std::size_t n = matches.size();
            for (std::size_t i = 0; i < nodes.size(); ++i)
                for (auto d : matches) n += admit(nodes, static_cast<std::int32_t>(i), d) ? 1 : 0;
            return n;
        };
        if ((nodes.size() + 1) * matches.size() + nodes.size() > params.node_budget) {
            while (!nodes.empty() && nodes.size() + pending() > params.node_budget) {
                auto before = nodes.size();
                purge_leaves(nodes, params.gap_penalty, count_db_gaps);
                if (nodes.size() == before) break;
            }
        }

        const std::size_t existing = nodes.size();
        for (auto d : matches) {
            nodes.push_back({-1, {q, d}, c, 1, q, d});
            for (std::size_t i = 0; i < existing; ++i) {
                if (!admit(nodes, static_cast<std::int32_t>(i), d)) continue;
                const auto& p = nodes[i];
                nodes.push_back({static_cast<std::int32_t>(i), {q, d}, p.sum + c, p.count + 1, p.first_q, p.first_d});
                ++nodes[i].children;
            }
        }
    }

    struct Ranked {
        double score;
        std::uint32_t gaps;
        std::size_t node;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto g = gap_count(nodes[i], count_db_gaps);
        ranked.push_back({nodes[i].sum - params.gap_penalty * g, g, i});
    }
    auto coarse = [](const Ranked& a, const Ranked& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.gaps < b.gaps;
    };
    if (ranked.size() > params.max_sequences && params.max_sequences > 0) {
        std::nth_element(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(params.max_sequences - 1),
                         ranked.end(), coarse);
        auto cut = ranked[params.max_sequences - 1];
        std::erase_if(ranked, [&](const Ranked& r) { return coarse(cut, r); });
    }

    std::vector<HitSequence> out;
    out.reserve(ranked.size());
    for (const auto& r : ranked) {
        HitSequence s;
        s.score = r.score;
        s.gaps = r.gaps;
        for (auto n = static_cast<std::int32_t>(r.node); n >= 0; n = nodes[n].parent) s.hits.push_back(nodes[n].hit);
        std::reverse(s.hits.begin(), s.hits.end());
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), better);
    if (out.size() > params.max_sequences) out.resize(params.max_sequences);
    return out;
}

}  // namespace detail

}  // namespace sp
