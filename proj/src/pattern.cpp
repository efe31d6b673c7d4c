#include "sp/pattern.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace sp {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

PatternStore::PatternStore() : symbols_(std::make_shared<SymbolTable>()) {}

PatternStore::PatternStore(std::shared_ptr<SymbolTable> symbols) : symbols_(std::move(symbols)) {}

std::size_t PatternStore::add(Pattern p) {
    if (p.symbols.empty()) throw std::invalid_argument("empty pattern");
    if (p.frequency == 0) throw std::invalid_argument("pattern frequency must be positive");
    patterns_.push_back(std::move(p));
    layout_.emplace_back(patterns_.size() - 1);
    return patterns_.size() - 1;
}

std::size_t PatternStore::add(std::string_view text, Role role, std::uint64_t frequency) {
    Pattern p;
    for (auto tok : tokenize(text)) p.symbols.push_back(symbols_->intern(tok));
    p.role = role;
    p.frequency = frequency;
    return add(std::move(p));
}

std::vector<std::size_t> PatternStore::old_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < patterns_.size(); ++i)
        if (patterns_[i].role == Role::Old) out.push_back(i);
    return out;
}

std::vector<std::size_t> PatternStore::new_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < patterns_.size(); ++i)
        if (patterns_[i].role == Role::New) out.push_back(i);
    return out;
}

void PatternStore::declare_ids(const std::vector<std::string>& globs) {
    for (const auto& g : globs)
        if (std::find(id_globs_.begin(), id_globs_.end(), g) != id_globs_.end())
            throw std::invalid_argument("duplicate %id declaration: " + g);
    id_globs_.insert(id_globs_.end(), globs.begin(), globs.end());
    layout_.emplace_back(globs);
}

void PatternStore::classify() {
    auto& table = *symbols_;
    if (!id_globs_.empty()) {
        for (SymbolId s = 0; s < table.size(); ++s) {
            bool id = std::any_of(id_globs_.begin(), id_globs_.end(), [&](const std::string& g) {
                return fnmatch(g.c_str(), table.name(s).c_str(), 0) == 0;
            });
            table.set_class(s, id ? SymbolClass::Id : SymbolClass::Contents);
        }
        return;
    }
    for (SymbolId s = 0; s < table.size(); ++s)
        table.set_class(s, table.name(s).starts_with('#') ? SymbolClass::Id : SymbolClass::Contents);
    for (const auto& p : patterns_) {
        if (p.role != Role::Old) continue;
        table.set_class(p.symbols.front(), SymbolClass::Id);
        for (std::size_t i = 1; i < p.symbols.size() && all_digits(table.name(p.symbols[i])); ++i)
            table.set_class(p.symbols[i], SymbolClass::Id);
    }
}

std::string PatternStore::text(std::size_t i) const {
    std::string out;
    for (auto s : patterns_.at(i).symbols) {
        if (!out.empty()) out += ' ';
        out += symbols_->name(s);
    }
    return out;
}

void parse_patterns(std::string_view text, Role role, PatternStore& store) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto toks = tokenize(line);
        if (toks.empty()) continue;

        if (toks.front().starts_with('%')) {
            if (toks.front() != "%id") throw ParseError(line_no, "unknown directive " + std::string(toks.front()));
            if (toks.size() < 2) throw ParseError(line_no, "%id needs at least one name or glob");
            std::vector<std::string> globs(toks.begin() + 1, toks.end());
            try {
                store.declare_ids(globs);
            } catch (const std::invalid_argument& e) {
                throw ParseError(line_no, e.what());
            }
            continue;
        }

        Pattern p;
        p.role = role;
        if (toks.back().starts_with('(')) {
            auto f = toks.back();
            if (f.size() < 3 || f.back() != ')' || !all_digits(f.substr(1, f.size() - 2)))
                throw ParseError(line_no, "malformed frequency " + std::string(f));
            auto digits = f.substr(1, f.size() - 2);
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p.frequency);
            if (ec != std::errc() || p.frequency == 0) throw ParseError(line_no, "frequency must be a positive integer");
            p.explicit_frequency = true;
            toks.pop_back();
        }
        if (toks.empty()) throw ParseError(line_no, "pattern has no symbols");
        for (auto t : toks) p.symbols.push_back(store.symbols().intern(t));
        store.add(std::move(p));
    }
}

PatternStore parse_store(std::string_view old_text, std::string_view new_text) {
    PatternStore store;
    parse_patterns(old_text, Role::Old, store);
    parse_patterns(new_text, Role::New, store);
    store.classify();
    return store;
}

std::string serialize(const PatternStore& store, Role role) {
    std::ostringstream out;
    for (const auto& line : store.layout()) {
        if (auto* globs = std::get_if<std::vector<std::string>>(&line)) {
            out << "%id";
            for (const auto& g : *globs) out << ' ' << g;
            out << '\n';
            continue;
        }
        auto i = std::get<std::size_t>(line);
        const auto& p = store.at(i);
        if (p.role != role) continue;
        out << store.text(i);
        if (p.frequency != 1 || p.explicit_frequency) out << " (" << p.frequency << ')';
        out << '\n';
    }
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace sp
