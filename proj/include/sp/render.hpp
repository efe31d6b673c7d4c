#pragma once

#include <string>

#include "sp/alignment.hpp"

namespace sp {

enum class Orientation { Rows, Columns };

// Monospaced grid. Rows: one pattern per line, indices at both margins and
// '|' on the lines between. Columns: one pattern per column, '-' joining
// unified symbols, indices above and below.
std::string render(const Alignment& a, const PatternStore& store, Orientation o = Orientation::Rows);

}  // namespace sp
