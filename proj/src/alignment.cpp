#include "sp/alignment.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>

namespace sp {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 29;
    return h;
}

bool opens_with(const std::string& open, const std::string& close) {
    return (open == "<" && close == ">") ||
           (close.size() == open.size() + 1 && close[0] == '#' && close.compare(1, std::string::npos, open) == 0);
}

// Index of the bracket matching the one at i, if s[i] is a bracket with a
// partner in s. Openers look right, closers look left.
std::optional<std::size_t> bracket_partner(std::span<const SymbolId> s, std::size_t i, const SymbolTable& table) {
    const auto& name = table.name(s[i]);
    int depth = 0;
    for (std::size_t j = i; j < s.size(); ++j) {
        const auto& n = table.name(s[j]);
        if (n == name) ++depth;
        else if (opens_with(name, n)) --depth;
        if (depth == 0) return j;
    }
    depth = 0;
    for (std::size_t j = i + 1; j-- > 0;) {
        const auto& n = table.name(s[j]);
        if (n == name) ++depth;
        else if (opens_with(n, name)) --depth;
        if (depth == 0) return j;
    }
    return std::nullopt;
}

bool closes(std::span<const SymbolId> s, std::size_t open, std::size_t close, const SymbolTable& table) {
    return close > open && bracket_partner(s, open, table) == close;
}

}  // namespace

Alignment Alignment::seed(const PatternStore& store, std::size_t new_index) {
    const auto& p = store.at(new_index);
    Alignment a;
    AlignmentRow row;
    row.pattern = new_index;
    row.is_new = true;
    for (std::uint32_t i = 0; i < p.symbols.size(); ++i) {
        row.columns.push_back(i);
        a.cells_.push_back({Cell{0, i}});
        a.symbols_.push_back(p.symbols[i]);
    }
    a.rows_.push_back(std::move(row));
    return a;
}

bool Alignment::has_new_cell(std::size_t c) const {
    for (const auto& cell : cells_.at(c))
        if (rows_[cell.row].is_new) return true;
    return false;
}

bool Alignment::has_old_cell(std::size_t c) const {
    for (const auto& cell : cells_.at(c))
        if (!rows_[cell.row].is_new) return true;
    return false;
}

bool Alignment::order_columns() {
    const std::size_t n = cells_.size();
    std::vector<std::vector<std::uint32_t>> succ(n);
    std::vector<std::uint32_t> indeg(n, 0);
    for (const auto& r : rows_)
        for (std::size_t i = 1; i < r.columns.size(); ++i) {
            succ[r.columns[i - 1]].push_back(r.columns[i]);
            ++indeg[r.columns[i]];
        }
    // Old-only columns go first when free; then by the earliest cell.
    using Key = std::tuple<int, std::uint32_t, std::uint32_t, std::uint32_t>;
    auto key = [&](std::uint32_t c) {
        const auto& first = cells_[c].front();
        return Key{has_new_cell(c) ? 1 : 0, first.row, first.pos, c};
    };
    std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
    for (std::uint32_t c = 0; c < n; ++c)
        if (indeg[c] == 0) ready.push(key(c));
    std::vector<std::uint32_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        auto c = std::get<3>(ready.top());
        ready.pop();
        order.push_back(c);
        for (auto s : succ[c])
            if (--indeg[s] == 0) ready.push(key(s));
    }
    if (order.size() != n) return false;

    std::vector<std::uint32_t> rank(n);
    for (std::uint32_t i = 0; i < n; ++i) rank[order[i]] = i;
    std::vector<std::vector<Cell>> cells(n);
    std::vector<SymbolId> symbols(n);
    for (std::uint32_t c = 0; c < n; ++c) {
        cells[rank[c]] = std::move(cells_[c]);
        symbols[rank[c]] = symbols_[c];
    }
    cells_ = std::move(cells);
    symbols_ = std::move(symbols);
    for (auto& r : rows_)
        for (auto& c : r.columns) c = rank[c];
    return true;
}

std::vector<Bitset> Alignment::reachability() const {
    const std::size_t n = cells_.size();
    const std::size_t words = (n + 63) / 64;
    std::vector<Bitset> reach(n, Bitset(words, 0));
    std::vector<std::vector<std::uint32_t>> succ(n);
    for (const auto& r : rows_)
        for (std::size_t i = 1; i < r.columns.size(); ++i) succ[r.columns[i - 1]].push_back(r.columns[i]);
    for (std::size_t c = n; c-- > 0;)
        for (auto s : succ[c]) {
            reach[c][s / 64] |= 1ULL << (s % 64);
            for (std::size_t w = 0; w < words; ++w) reach[c][w] |= reach[s][w];
        }
    return reach;
}

std::optional<Alignment> Alignment::extend(const PatternStore& store, std::size_t pattern,
                                           std::span<const Hit> hits) const {
    const auto& syms = store.at(pattern).symbols;
    if (hits.empty()) return std::nullopt;
    const bool has_old = rows_.size() > 1;
    bool old_hit = false;
    std::map<std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>> shared;  // row -> (q, pos)
    for (std::size_t i = 0; i < hits.size(); ++i) {
        const auto& h = hits[i];
        if (i > 0 && hits[i - 1].query_pos >= h.query_pos) return std::nullopt;
        if (h.query_pos >= syms.size() || h.db_pos >= cells_.size()) return std::nullopt;
        if (symbols_[h.db_pos] != syms[h.query_pos]) return std::nullopt;
        if (cells_[h.db_pos].size() != 1) return std::nullopt;
        if (!rows_[cells_[h.db_pos].front().row].is_new && !store.symbols().is_id(syms[h.query_pos]))
            return std::nullopt;
        for (const auto& cell : cells_[h.db_pos]) {
            const auto& row = rows_[cell.row];
            if (row.is_new) continue;
            old_hit = true;
            if (row.pattern == pattern && cell.pos == h.query_pos) return std::nullopt;
            shared[cell.row].emplace_back(h.query_pos, cell.pos);
        }
    }
    if (has_old && !old_hit) return std::nullopt;
    const auto& table = store.symbols();
    bool anchored = false, head_placed = false;
    for (const auto& [row, pairs] : shared)
        for (const auto& [q, pos] : pairs) {
            anchored = anchored || q == 0 || pos == 0;
            head_placed = head_placed || q == 0;
        }
    for (const auto& [row, pairs] : shared) {
        const auto last = store.at(rows_[row].pattern).symbols.size() - 1;
        for (std::size_t i = 1; i < pairs.size(); ++i) {
            const auto [q0, p0] = pairs[i - 1];
            const auto [q1, p1] = pairs[i];
            // Both sides may fill the slot when it is one row's whole extent.
            const auto& other = store.at(rows_[row].pattern).symbols;
            const bool whole = ((p0 == 0 && p1 == last) || (q0 == 0 && q1 == syms.size() - 1)) &&
                               closes(syms, q0, q1, table) && closes(other, p0, p1, table);
            if (q1 - q0 > 1 && p1 > p0 + 1 && !whole) return std::nullopt;
        }
        bool shares_id = false, same_place = false, shares_head = false, both_heads = false, both_seconds = false,
             both_tails = false;
        for (const auto& [q, pos] : pairs) {
            shares_id = shares_id || table.is_id(syms[q]);
            same_place = same_place || (q == pos && table.is_id(syms[q]));
            shares_head = shares_head || q == 0 || pos == 0;
            both_heads = both_heads || (q == 0 && pos == 0);
            both_seconds = both_seconds || (q == 1 && pos == 1);
            both_tails = both_tails || (q == syms.size() - 1 && pos == last);
        }
        // A row placed by its head may repeat another row's layout only where
        // it fills whole bracket pairs, as a refinement of shared parts does.
        bool bracketed = head_placed;
        for (const auto& [q, pos] : pairs) {
            const auto& name = table.name(syms[q]);
            const auto partner = name.size() > 1 && name[0] == '#' ? name.substr(1) : "#" + name;
            bool found = false;
            for (const auto& [q2, pos2] : pairs) found = found || table.name(syms[q2]) == partner;
            bracketed = bracketed && found;
        }
        if (shares_id && !shares_head && ((same_place && !bracketed) || !anchored)) return std::nullopt;
        // Away from both heads, a bracket is only shared with its partner.
        if (!shares_head) {
            const auto& other = store.at(rows_[row].pattern).symbols;
            for (const auto& [q, pos] : pairs) {
                const auto qp = bracket_partner(syms, q, table);
                if (!qp) continue;
                const auto pp = bracket_partner(other, pos, table);
                const auto mate = std::find(pairs.begin(), pairs.end(),
                                            std::pair<std::uint32_t, std::uint32_t>(*qp, pp ? *pp : other.size()));
                if (!pp || mate == pairs.end()) return std::nullopt;
            }
        }
        // Two alternatives of one class stacked bracket to bracket.
        if (both_heads && both_tails) return std::nullopt;
        if (both_heads && !both_seconds) {
            const auto& other = store.at(rows_[row].pattern).symbols;
            if (syms.size() > 1 && other.size() > 1 && table.is_id(syms[1]) && table.is_id(other[1]))
                return std::nullopt;
        }
    }

    Alignment b = *this;
    const auto r = static_cast<std::uint32_t>(b.rows_.size());
    AlignmentRow row;
    row.pattern = pattern;
    std::size_t next_hit = 0;
    for (std::uint32_t q = 0; q < syms.size(); ++q) {
        std::uint32_t c;
        if (next_hit < hits.size() && hits[next_hit].query_pos == q) {
            c = hits[next_hit++].db_pos;
        } else {
            c = static_cast<std::uint32_t>(b.cells_.size());
            b.cells_.emplace_back();
            b.symbols_.push_back(syms[q]);
        }
        b.cells_[c].push_back({r, q});
        row.columns.push_back(c);
    }
    b.rows_.push_back(std::move(row));
    if (!b.order_columns()) return std::nullopt;
    return b;
}

std::optional<Alignment> Alignment::from_rows(const PatternStore& store, std::vector<AlignmentRow> rows) {
    if (rows.empty() || !rows.front().is_new) return std::nullopt;
    Alignment a;
    std::map<std::uint32_t, std::uint32_t> dense;
    for (const auto& r : rows) {
        if (r.pattern >= store.size() || r.columns.size() != store.at(r.pattern).symbols.size()) return std::nullopt;
        for (auto c : r.columns) dense.emplace(c, 0);
    }
    std::uint32_t next = 0;
    for (auto& [label, id] : dense) id = next++;
    for (auto& r : rows)
        for (auto& c : r.columns) c = dense[c];
    a.cells_.assign(next, {});
    a.symbols_.assign(next, 0);
    for (std::uint32_t ri = 0; ri < rows.size(); ++ri) {
        const auto& syms = store.at(rows[ri].pattern).symbols;
        for (std::uint32_t p = 0; p < syms.size(); ++p) {
            auto c = rows[ri].columns[p];
            if (!a.cells_[c].empty() && a.symbols_[c] != syms[p]) return std::nullopt;
            a.cells_[c].push_back({ri, p});
            a.symbols_[c] = syms[p];
        }
    }
    for (const auto& cell : a.cells_)
        if (cell.empty()) return std::nullopt;
    a.rows_ = std::move(rows);
    if (!a.order_columns()) return std::nullopt;
    for (const auto& r : a.rows_)
        for (std::size_t i = 1; i < r.columns.size(); ++i)
            if (r.columns[i] <= r.columns[i - 1]) return std::nullopt;
    return a;
}

AlignmentScore score_alignment(const Alignment& a, const PatternStore& store, const CodeTable& table) {
    AlignmentScore s;
    const auto& new_row = a.rows().front();
    for (std::uint32_t p = 0; p < new_row.columns.size(); ++p) {
        auto c = new_row.columns[p];
        double bits = table.cost(a.symbol(c));
        if (a.cells(c).size() >= 2) {
            s.encoded_bits += bits;
            s.encoded_positions.push_back(p);
        } else {
            s.unmatched_bits += bits;
            ++s.unmatched;
        }
    }
    for (std::size_t c = 0; c < a.column_count(); ++c) {
        const auto& cells = a.cells(c);
        if (cells.size() != 1 || a.rows()[cells.front().row].is_new) continue;
        if (!store.symbols().is_id(a.symbol(c))) continue;
        s.code.push_back(a.symbol(c));
        s.code_bits += table.cost(a.symbol(c));
    }
    s.cd = s.encoded_bits - s.code_bits;
    s.cr = s.code_bits > 0 ? s.encoded_bits / s.code_bits : kInfiniteRatio;
    return s;
}

std::string canonical_key(const Alignment& a) {
    const auto& rows = a.rows();
    const std::size_t R = rows.size();
    const std::size_t C = a.column_count();
    std::vector<std::uint64_t> row_label(R), col_label(C);
    for (std::size_t r = 0; r < R; ++r) row_label[r] = mix(rows[r].is_new ? 1 : 2, rows[r].pattern);
    for (std::size_t c = 0; c < C; ++c) col_label[c] = mix(3, a.symbol(c));

    std::vector<std::pair<std::uint64_t, std::uint32_t>> tmp;
    for (std::size_t round = 0; round <= R; ++round) {
        std::vector<std::uint64_t> next_col(C);
        for (std::size_t c = 0; c < C; ++c) {
            tmp.clear();
            for (const auto& cell : a.cells(c)) tmp.emplace_back(row_label[cell.row], cell.pos);
            std::sort(tmp.begin(), tmp.end());
            std::uint64_t h = col_label[c];
            for (const auto& [l, p] : tmp) h = mix(mix(h, l), p);
            next_col[c] = h;
        }
        std::vector<std::uint64_t> next_row(R);
        for (std::size_t r = 0; r < R; ++r) {
            std::uint64_t h = row_label[r];
            for (auto c : rows[r].columns) h = mix(h, next_col[c]);
            next_row[r] = h;
        }
        col_label = std::move(next_col);
        row_label = std::move(next_row);
    }

    std::vector<std::uint32_t> order(R);
    for (std::uint32_t r = 0; r < R; ++r) order[r] = r;
    std::stable_sort(order.begin() + 1, order.end(), [&](std::uint32_t x, std::uint32_t y) {
        if (rows[x].pattern != rows[y].pattern) return rows[x].pattern < rows[y].pattern;
        return row_label[x] < row_label[y];
    });
    std::vector<std::int64_t> id(C, -1);
    std::int64_t next = 0;
    std::ostringstream out;
    for (auto r : order) {
        out << (rows[r].is_new ? 'n' : 'o') << rows[r].pattern << ':';
        for (auto c : rows[r].columns) {
            if (id[c] < 0) id[c] = next++;
            out << id[c] << ',';
        }
        out << ';';
    }
    return out.str();
}

bool evidence_supported(const Alignment& a) {
    const auto& rows = a.rows();
    std::vector<char> new_hit(rows.size(), 0);
    for (std::size_t r = 1; r < rows.size(); ++r)
        for (auto c : rows[r].columns)
            if (a.has_new_cell(c)) new_hit[r] = 1;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (new_hit[r]) continue;
        std::vector<std::uint32_t> neighbours;
        bool supported = false;
        for (auto c : rows[r].columns)
            for (const auto& cell : a.cells(c)) {
                if (cell.row == r || rows[cell.row].is_new) continue;
                if (new_hit[cell.row]) supported = true;
                neighbours.push_back(cell.row);
            }
        std::sort(neighbours.begin(), neighbours.end());
        neighbours.erase(std::unique(neighbours.begin(), neighbours.end()), neighbours.end());
        // A dangling row must hang from evidence; a connecting row is fine.
        if (!supported && neighbours.size() < 2) return false;
    }
    return true;
}

std::vector<SymbolId> contents_sequence(const Alignment& a, const PatternStore& store, bool include_new) {
    std::vector<SymbolId> out;
    for (std::size_t c = 0; c < a.column_count(); ++c) {
        if (store.symbols().is_id(a.symbol(c))) continue;
        if (include_new ? true : a.has_old_cell(c)) out.push_back(a.symbol(c));
    }
    return out;
}

FlatAlignment flatten(const Alignment& a) {
    FlatAlignment f;
    f.symbols = a.column_symbols();
    for (std::size_t c = 0; c < a.column_count(); ++c) f.provenance.push_back(a.cells(c));
    for (const auto& r : a.rows()) f.row_patterns.push_back(r.pattern);
    return f;
}

std::optional<Alignment> expand(const PatternStore& store, const FlatAlignment& flat) {
    std::vector<AlignmentRow> rows(flat.row_patterns.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r].pattern = flat.row_patterns[r];
        rows[r].is_new = r < flat.new_row_count;
        if (rows[r].pattern >= store.size()) return std::nullopt;
        rows[r].columns.assign(store.at(rows[r].pattern).symbols.size(), UINT32_MAX);
    }
    for (std::uint32_t c = 0; c < flat.provenance.size(); ++c)
        for (const auto& cell : flat.provenance[c]) {
            if (cell.row >= rows.size() || cell.pos >= rows[cell.row].columns.size()) return std::nullopt;
            rows[cell.row].columns[cell.pos] = c;
        }
    for (const auto& r : rows)
        for (auto c : r.columns)
            if (c == UINT32_MAX) return std::nullopt;
    auto a = Alignment::from_rows(store, std::move(rows));
    if (a && a->column_symbols() != flat.symbols) return std::nullopt;
    return a;
}

}  // namespace sp
