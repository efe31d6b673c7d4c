#include "sp/search.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace sp {

namespace {

constexpr std::size_t kCandidateFactor = 4;
constexpr SymbolId kClosed = std::numeric_limits<SymbolId>::max();

std::vector<std::string> spelled(const std::vector<SymbolId>& code, const SymbolTable& symbols) {
    std::vector<std::string> out;
    out.reserve(code.size());
    for (auto s : code) out.push_back(symbols.name(s));
    return out;
}

// Maximal runs of consecutive matched New positions.
std::size_t matched_runs(const std::vector<std::uint32_t>& positions) {
    std::size_t runs = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) runs += i == 0 || positions[i] != positions[i - 1] + 1;
    return runs;
}

}  // namespace

bool ranks_before(const ScoredAlignment& a, const ScoredAlignment& b, const SymbolTable& symbols) {
    if (a.score.cd != b.score.cd) return a.score.cd > b.score.cd;
    if (a.alignment.rows().size() != b.alignment.rows().size())
        return a.alignment.rows().size() < b.alignment.rows().size();
    const auto ra = matched_runs(a.score.encoded_positions), rb = matched_runs(b.score.encoded_positions);
    if (ra != rb) return ra < rb;
    auto ca = spelled(a.score.code, symbols), cb = spelled(b.score.code, symbols);
    if (ca != cb) return ca < cb;
    return a.key < b.key;
}

std::vector<Alignment> extensions(const Alignment& driver, const PatternStore& store, std::size_t pattern,
                                  const CodeTable& table, const SearchParams& params) {
    // Full columns take no more hits; Old rows meet only on ID symbols.
    std::vector<SymbolId> db = driver.column_symbols();
    for (std::size_t c = 0; c < db.size(); ++c)
        if (driver.cells(c).size() >= 2 || (!driver.has_new_cell(c) && !store.symbols().is_id(db[c]))) db[c] = kClosed;
    bool any = false;
    const auto& query = store.at(pattern).symbols;
    for (std::size_t c = 0; c < db.size() && !any; ++c)
        if (driver.cells(c).size() == 1 && std::find(query.begin(), query.end(), db[c]) != query.end()) any = true;
    if (!any) return {};

    const auto reach = driver.reachability();
    auto admit = [&](const std::vector<detail::HitNode>& nodes, std::int32_t parent, std::uint32_t d) {
        const auto& rd = reach[d];
        for (auto n = parent; n >= 0; n = nodes[n].parent) {
            auto c = nodes[n].hit.db_pos;
            if (c == d || (rd[c / 64] >> (c % 64) & 1ULL)) return false;
        }
        return true;
    };
    MatchParams mp;
    mp.node_budget = params.budget;
    mp.max_sequences = params.max_sequences * kCandidateFactor;
    mp.gap_penalty = params.gap_penalty;
    auto cost = [&](SymbolId s) { return table.cost(s); };
    auto seqs = detail::grow_hit_tree(query, db, cost, mp, false, admit);

    // A sequence contained in another gives the same row with fewer
    // unifications, so only the larger one is tried.
    std::vector<Alignment> out;
    for (const auto& s : seqs) {
        bool dominated = false;
        for (const auto& t : seqs)
            if (t.hits.size() > s.hits.size() &&
                std::includes(t.hits.begin(), t.hits.end(), s.hits.begin(), s.hits.end())) {
                dominated = true;
                break;
            }
        if (dominated) continue;
        if (auto e = driver.extend(store, pattern, s.hits)) {
            out.push_back(std::move(*e));
            if (out.size() == params.max_sequences) break;
        }
    }
    return out;
}

std::vector<ScoredAlignment> build_alignments(const PatternStore& store, std::size_t new_index,
                                              const CodeTable& table, const SearchParams& params,
                                              SearchStats* stats) {
    const auto old = store.old_indices();
    auto before = [&](const ScoredAlignment& a, const ScoredAlignment& b) { return ranks_before(a, b, store.symbols()); };

    std::vector<ScoredAlignment> pool;
    std::vector<char> expanded;
    std::unordered_set<std::string> seen;
    {
        auto seed = Alignment::seed(store, new_index);
        ScoredAlignment s{seed, score_alignment(seed, store, table), canonical_key(seed)};
        seen.insert(s.key);
        pool.push_back(std::move(s));
        expanded.push_back(0);
    }

    std::size_t stage = 0;
    for (; stage < params.max_stages && !old.empty(); ++stage) {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < pool.size(); ++i)
            if (!expanded[i]) open.push_back(i);
        if (open.empty()) break;
        std::sort(open.begin(), open.end(), [&](std::size_t a, std::size_t b) { return before(pool[a], pool[b]); });
        if (open.size() > params.beam_driving) open.resize(params.beam_driving);
        for (auto i : open) expanded[i] = 1;

        const std::size_t tasks = open.size() * old.size();
        std::vector<std::vector<ScoredAlignment>> found(tasks);
#pragma omp parallel for schedule(dynamic) if (params.parallel)
        for (std::size_t t = 0; t < tasks; ++t) {
            const auto& driver = pool[open[t / old.size()]].alignment;
            for (auto& e : extensions(driver, store, old[t % old.size()], table, params)) {
                ScoredAlignment s{std::move(e), {}, {}};
                s.key = canonical_key(s.alignment);
                s.score = score_alignment(s.alignment, store, table);
                found[t].push_back(std::move(s));
            }
        }

        std::vector<ScoredAlignment> fresh;
        for (auto& batch : found)
            for (auto& s : batch)
                if (seen.insert(s.key).second) fresh.push_back(std::move(s));
        std::sort(fresh.begin(), fresh.end(), before);
        if (fresh.size() > params.beam_target) fresh.resize(params.beam_target);
        for (auto& s : fresh) {
            pool.push_back(std::move(s));
            expanded.push_back(0);
        }
    }
    if (stats) {
        stats->stages = stage;
        stats->formed = pool.size() - 1;
    }

    std::vector<ScoredAlignment> report;
    for (auto& s : pool)
        if (!s.score.encoded_positions.empty() && evidence_supported(s.alignment)) report.push_back(std::move(s));
    std::sort(report.begin(), report.end(), before);
    if (report.size() > params.max_alignments) report.resize(params.max_alignments);
    return report;
}

Production produce(const PatternStore& store, std::size_t code_index, const CodeTable& table,
                   const SearchParams& params) {
    Production p;
    p.alignments = build_alignments(store, code_index, table, params);
    if (!p.alignments.empty()) p.surface = contents_sequence(p.alignments.front().alignment, store);
    return p;
}

std::string join(const std::vector<SymbolId>& symbols, const SymbolTable& table) {
    std::string out;
    for (auto s : symbols) {
        if (!out.empty()) out += ' ';
        out += table.name(s);
    }
    return out;
}

}  // namespace sp
