#include "sp/symbol.hpp"

namespace sp {

SymbolId SymbolTable::intern(std::string_view name) {
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    auto id = static_cast<SymbolId>(names_.size());
    names_.emplace_back(name);
    classes_.push_back(SymbolClass::Contents);
    index_.emplace(std::string(name), id);
    return id;
}

std::optional<SymbolId> SymbolTable::find(std::string_view name) const {
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    return std::nullopt;
}

}  // namespace sp
