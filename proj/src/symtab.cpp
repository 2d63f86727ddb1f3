#include "bfst/symtab.hpp"

#include <algorithm>
#include <cctype>

namespace bfst {

const char* to_string(SymbolKind kind) {
    switch (kind) {
        case SymbolKind::Epsilon: return "epsilon";
        case SymbolKind::Any: return "any";
        case SymbolKind::Boundary: return "boundary";
        case SymbolKind::Tag: return "tag";
        case SymbolKind::Class: return "class";
        case SymbolKind::Marker: return "marker";
    }
    return "?";
}

SymbolKind symbol_kind_from_string(const std::string& s) {
    if (s == "epsilon") return SymbolKind::Epsilon;
    if (s == "any") return SymbolKind::Any;
    if (s == "boundary") return SymbolKind::Boundary;
    if (s == "tag") return SymbolKind::Tag;
    if (s == "class") return SymbolKind::Class;
    if (s == "marker") return SymbolKind::Marker;
    throw Error("unknown symbol kind '" + s + "'");
}

SymbolTable::SymbolTable() {
    intern("<eps>", SymbolKind::Epsilon);
    intern("?", SymbolKind::Any);
    intern("<#>", SymbolKind::Boundary);
}

SymbolId SymbolTable::intern(const std::string& name, SymbolKind kind) {
    if (name.empty())
        throw Error("cannot intern empty symbol name");
    for (char c : name) {
        if (std::isspace(static_cast<unsigned char>(c)))
            throw Error("symbol name contains whitespace: '" + name + "'");
    }
    auto it = by_name_.find(name);
    if (it != by_name_.end()) {
        if (kinds_[it->second] != kind)
            throw Error("symbol '" + name + "' already interned with kind " +
                        to_string(kinds_[it->second]));
        return it->second;
    }
    if (frozen_)
        throw Error("symbol table is frozen; cannot intern '" + name + "'");
    SymbolId id = static_cast<SymbolId>(names_.size());
    by_name_.emplace(name, id);
    names_.push_back(name);
    kinds_.push_back(kind);
    return id;
}

bool SymbolTable::find(const std::string& name, SymbolId* id) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return false;
    if (id) *id = it->second;
    return true;
}

const std::string& SymbolTable::name(SymbolId id) const {
    if (id >= names_.size())
        throw Error("symbol id " + std::to_string(id) + " not in table");
    return names_[id];
}

SymbolKind SymbolTable::kind(SymbolId id) const {
    if (id >= kinds_.size())
        throw Error("symbol id " + std::to_string(id) + " not in table");
    return kinds_[id];
}

std::vector<SymbolId> SymbolTable::sigma() const {
    std::vector<SymbolId> out;
    out.reserve(kinds_.size());
    for (SymbolId id = 0; id < kinds_.size(); ++id) {
        if (id != kEpsilon && id != kAny && id != kBoundary) out.push_back(id);
    }
    return out;
}

std::vector<SymbolId> SymbolTable::ids_of_kind(SymbolKind kind) const {
    std::vector<SymbolId> out;
    for (SymbolId id = 0; id < kinds_.size(); ++id) {
        if (kinds_[id] == kind) out.push_back(id);
    }
    return out;
}

std::string SymbolTable::marker_name(const std::string& base, bool look_back,
                                     unsigned distance) {
    return base + (look_back ? "-B" : "-A") + std::to_string(distance);
}

SymbolId SymbolTable::intern_marker(SymbolId base, bool look_back, unsigned distance) {
    if (distance < 1)
        throw Error("marker distance must be >= 1");
    SymbolKind base_kind = kind(base);
    if (base_kind != SymbolKind::Tag && base_kind != SymbolKind::Class &&
        base_kind != SymbolKind::Boundary)
        throw Error("marker base must be a tag, class or boundary symbol, got " +
                    std::string(to_string(base_kind)));
    return intern(marker_name(name(base), look_back, distance), SymbolKind::Marker);
}

bool SymbolTable::parse_marker_name(const std::string& name, std::string* base,
                                    bool* look_back, unsigned* distance) {
    // Scan for the last "-B<k>" / "-A<k>" suffix.
    std::size_t pos = name.rfind('-');
    if (pos == std::string::npos || pos == 0 || pos + 2 >= name.size()) return false;
    char side = name[pos + 1];
    if (side != 'B' && side != 'A') return false;
    unsigned k = 0;
    for (std::size_t i = pos + 2; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
        k = k * 10 + static_cast<unsigned>(name[i] - '0');
    }
    if (k < 1) return false;
    if (base) *base = name.substr(0, pos);
    if (look_back) *look_back = (side == 'B');
    if (distance) *distance = k;
    return true;
}

bool SymbolTable::operator==(const SymbolTable& other) const {
    return names_ == other.names_ && kinds_ == other.kinds_;
}

bool compatible(const SymbolTablePtr& a, const SymbolTablePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

} // namespace bfst
