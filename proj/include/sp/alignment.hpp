#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sp/code_table.hpp"
#include "sp/matcher.hpp"
#include "sp/pattern.hpp"

namespace sp {

struct Cell {
    std::uint32_t row = 0;
    std::uint32_t pos = 0;
    auto operator<=>(const Cell&) const = default;
};

struct AlignmentRow {
    std::size_t pattern = 0;  // index into the store
    bool is_new = false;
    std::vector<std::uint32_t> columns;  // column of each position, strictly increasing
};

using Bitset = std::vector<std::uint64_t>;

// Rows are patterns; a column holds cells whose symbols were unified, at
// most two when built by extend.
// Columns are kept in one deterministic topological order of the partial
// order induced by the rows.
class Alignment {
public:
    static Alignment seed(const PatternStore& store, std::size_t new_index);

    const std::vector<AlignmentRow>& rows() const { return rows_; }
    std::size_t column_count() const { return cells_.size(); }
    const std::vector<Cell>& cells(std::size_t c) const { return cells_.at(c); }
    SymbolId symbol(std::size_t c) const { return symbols_.at(c); }
    const std::vector<SymbolId>& column_symbols() const { return symbols_; }

    bool has_new_cell(std::size_t c) const;
    bool has_old_cell(std::size_t c) const;
    std::size_t old_row_count() const { return rows_.size() - 1; }

    // reach[c] has bit d set when column d lies strictly after c.
    std::vector<Bitset> reachability() const;

    // Adds a row for `pattern`; hit.query_pos is a position in the pattern,
    // hit.db_pos a column. Returns nothing when a rule is broken:
    // - every hit lands in a column holding a single cell;
    // - two Old rows are unified only on ID symbols;
    // - once Old rows exist, at least one hit lands on an Old cell;
    // - no two rows both supply symbols between the same pair of shared columns,
    //   unless that pair is `X` and `#X` spanning one of the rows whole;
    // - a pattern is never unified with another row of itself position for position;
    // - two Old rows that share an ID symbol also share the first symbol of one of them,
    //   unless the new row shares a first symbol elsewhere and either the symbol sits at
    //   different positions or every shared symbol comes with its `X`/`#X` partner;
    // - rows unified at both first symbols do not go on with two different ID symbols;
    // - the result stays acyclic.
    std::optional<Alignment> extend(const PatternStore& store, std::size_t pattern,
                                    std::span<const Hit> hits) const;

    bool operator==(const Alignment&) const = default;

    // Rebuilds an alignment from rows whose column ids are arbitrary labels.
    static std::optional<Alignment> from_rows(const PatternStore& store, std::vector<AlignmentRow> rows);

private:
    bool order_columns();

    std::vector<AlignmentRow> rows_;
    std::vector<std::vector<Cell>> cells_;
    std::vector<SymbolId> symbols_;
};

struct AlignmentScore {
    double encoded_bits = 0;  // matched New symbols
    double code_bits = 0;     // the code pattern
    double cd = 0;            // compression difference
    double cr = 0;            // compression ratio
    std::vector<SymbolId> code;
    std::vector<std::uint32_t> encoded_positions;  // matched New positions, ascending
    double unmatched_bits = 0;
    std::size_t unmatched = 0;
};

inline constexpr double kInfiniteRatio = std::numeric_limits<double>::infinity();

// The code is every solitary Old cell whose symbol is an ID symbol, read in
// column order.
AlignmentScore score_alignment(const Alignment& a, const PatternStore& store, const CodeTable& table);

// Same key for alignments that differ only in the order rows were added.
std::string canonical_key(const Alignment& a);

// Every Old row without a New hit shares a column with a row that has one.
bool evidence_supported(const Alignment& a);

// Symbols of rows that are CONTENTS symbols, in column order.
std::vector<SymbolId> contents_sequence(const Alignment& a, const PatternStore& store, bool include_new = false);

struct FlatAlignment {
    std::vector<SymbolId> symbols;             // one per column
    std::vector<std::vector<Cell>> provenance; // cells behind each symbol
    std::vector<std::size_t> row_patterns;
    std::size_t new_row_count = 1;
};

FlatAlignment flatten(const Alignment& a);
std::optional<Alignment> expand(const PatternStore& store, const FlatAlignment& flat);

}  // namespace sp
