#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sp/symbol.hpp"

namespace sp {

enum class Role : std::uint8_t { New, Old };

struct Pattern {
    std::vector<SymbolId> symbols;
    Role role = Role::Old;
    std::uint64_t frequency = 1;
    std::string label;
    // Keeps "(1)" on output when the source spelled it out.
    bool explicit_frequency = false;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Patterns plus the symbol table they are spelled in. The table is shared
// so that derived stores (e.g. candidate grammars) keep the same ids.
class PatternStore {
public:
    PatternStore();
    explicit PatternStore(std::shared_ptr<SymbolTable> symbols);

    SymbolTable& symbols() { return *symbols_; }
    const SymbolTable& symbols() const { return *symbols_; }
    std::shared_ptr<SymbolTable> shared_symbols() const { return symbols_; }

    std::size_t add(Pattern p);
    std::size_t add(std::string_view text, Role role, std::uint64_t frequency = 1);
    std::size_t size() const { return patterns_.size(); }
    const Pattern& at(std::size_t i) const { return patterns_.at(i); }
    Pattern& at(std::size_t i) { return patterns_.at(i); }
    const std::vector<Pattern>& patterns() const { return patterns_; }

    std::vector<std::size_t> old_indices() const;
    std::vector<std::size_t> new_indices() const;

    // Throws std::invalid_argument when the same glob is declared twice.
    void declare_ids(const std::vector<std::string>& globs);
    const std::vector<std::string>& id_globs() const { return id_globs_; }

    // Applies the %id globs to every interned symbol. Without any
    // declaration: the leading symbol of each Old pattern, digit-only
    // symbols directly after it, and every name starting with '#'.
    void classify();

    std::string text(std::size_t i) const;

    // Line layout as read, so serialization can reproduce it.
    using Line = std::variant<std::vector<std::string>, std::size_t>;
    const std::vector<Line>& layout() const { return layout_; }

private:
    std::shared_ptr<SymbolTable> symbols_;
    std::vector<Pattern> patterns_;
    std::vector<std::string> id_globs_;
    std::vector<Line> layout_;
};

// Reads one pattern per line; every pattern gets `role`.
void parse_patterns(std::string_view text, Role role, PatternStore& store);
PatternStore parse_store(std::string_view old_text, std::string_view new_text = {});

// Writes directives and the patterns of `role` in their original order.
std::string serialize(const PatternStore& store, Role role);

std::string read_file(const std::string& path);

}  // namespace sp
