#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sp {

using SymbolId = std::uint32_t;

// ID symbols mark structure (class names, discriminators, end markers);
// CONTENTS symbols carry the data itself.
enum class SymbolClass : std::uint8_t { Contents, Id };

class SymbolTable {
public:
    SymbolId intern(std::string_view name);
    std::optional<SymbolId> find(std::string_view name) const;

    const std::string& name(SymbolId id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }

    SymbolClass symbol_class(SymbolId id) const { return classes_.at(id); }
    bool is_id(SymbolId id) const { return classes_.at(id) == SymbolClass::Id; }
    void set_class(SymbolId id, SymbolClass c) { classes_.at(id) = c; }

private:
    std::vector<std::string> names_;
    std::vector<SymbolClass> classes_;
    std::map<std::string, SymbolId, std::less<>> index_;
};

}  // namespace sp
