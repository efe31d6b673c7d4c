#include "sp/render.hpp"

#include <algorithm>

namespace sp {

namespace {

void trim_right(std::string& s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
}

std::string render_rows(const Alignment& a, const PatternStore& store) {
    const auto& rows = a.rows();
    const std::size_t R = rows.size(), C = a.column_count();
    std::vector<std::size_t> x(C), width(C);
    const std::size_t margin = std::to_string(R - 1).size() + 1;
    std::size_t at = margin;
    for (std::size_t c = 0; c < C; ++c) {
        width[c] = store.symbols().name(a.symbol(c)).size();
        x[c] = at;
        at += width[c] + 1;
    }
    const std::size_t right = at;
    // First and last row holding a cell of each column.
    std::vector<std::size_t> top(C, R), bottom(C, 0);
    for (std::size_t c = 0; c < C; ++c)
        for (const auto& cell : a.cells(c)) {
            top[c] = std::min<std::size_t>(top[c], cell.row);
            bottom[c] = std::max<std::size_t>(bottom[c], cell.row);
        }

    std::string out;
    for (std::size_t r = 0; r < R; ++r) {
        std::string line(right, ' ');
        auto index = std::to_string(r);
        line.replace(0, index.size(), index);
        std::vector<char> own(C, 0);
        for (auto c : rows[r].columns) {
            own[c] = 1;
            const auto& name = store.symbols().name(a.symbol(c));
            line.replace(x[c], name.size(), name);
        }
        for (std::size_t c = 0; c < C; ++c)
            if (!own[c] && top[c] < r && r < bottom[c]) line[x[c]] = '|';
        out += line + index + '\n';
        if (r + 1 == R) break;
        std::string link(right, ' ');
        for (std::size_t c = 0; c < C; ++c)
            if (top[c] <= r && r < bottom[c]) link[x[c]] = '|';
        trim_right(link);
        out += link + '\n';
    }
    return out;
}

std::string render_columns(const Alignment& a, const PatternStore& store) {
    const auto& rows = a.rows();
    const std::size_t R = rows.size(), C = a.column_count();
    std::vector<std::size_t> x(R);
    std::size_t at = 0;
    for (std::size_t r = 0; r < R; ++r) {
        std::size_t w = std::to_string(r).size();
        for (auto c : rows[r].columns) w = std::max(w, store.symbols().name(a.symbol(c)).size());
        x[r] = at;
        at += w + 3;
    }
    auto header = [&] {
        std::string s(at, ' ');
        for (std::size_t r = 0; r < R; ++r) {
            auto index = std::to_string(r);
            s.replace(x[r], index.size(), index);
        }
        trim_right(s);
        return s + '\n';
    };

    std::string out = header() + '\n';
    for (std::size_t c = 0; c < C; ++c) {
        std::vector<Cell> cells = a.cells(c);
        std::sort(cells.begin(), cells.end());
        std::string line(at, ' ');
        const auto& name = store.symbols().name(a.symbol(c));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            line.replace(x[cells[i].row], name.size(), name);
            if (i == 0) continue;
            for (auto k = x[cells[i - 1].row] + name.size() + 1; k + 1 < x[cells[i].row]; ++k) line[k] = '-';
        }
        trim_right(line);
        out += line + '\n';
    }
    return out + '\n' + header();
}

}  // namespace

std::string render(const Alignment& a, const PatternStore& store, Orientation o) {
    return o == Orientation::Rows ? render_rows(a, store) : render_columns(a, store);
}

}  // namespace sp
