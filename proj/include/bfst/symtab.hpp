#ifndef BFST_SYMTAB_HPP
#define BFST_SYMTAB_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "bfst/error.hpp"

namespace bfst {

using SymbolId = std::uint32_t;

// Reserved ids, present in every table.
inline constexpr SymbolId kEpsilon = 0;   // "<eps>"
inline constexpr SymbolId kAny = 1;       // "?", expanded at construction time
inline constexpr SymbolId kBoundary = 2;  // "<#>", sentence boundary

enum class SymbolKind : std::uint8_t {
    Epsilon,
    Any,
    Boundary,
    Tag,
    Class,
    Marker,
};

const char* to_string(SymbolKind kind);
SymbolKind symbol_kind_from_string(const std::string& s);

// Interned alphabet shared by all automata of one build.  Ids are dense and
// never reused.  Once frozen the alphabet is closed: complement and the "?"
// expansion are defined against it, and interning further symbols throws.
class SymbolTable {
public:
    SymbolTable();

    // Returns the id of `name`, interning it if new.  Names must be
    // non-empty and contain no whitespace.
    SymbolId intern(const std::string& name, SymbolKind kind);

    // Lookup without interning; returns false if absent.
    bool find(const std::string& name, SymbolId* id) const;

    const std::string& name(SymbolId id) const;
    SymbolKind kind(SymbolId id) const;
    bool contains(SymbolId id) const { return id < kinds_.size(); }

    std::size_t size() const { return kinds_.size(); }

    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

    // The closed alphabet that "?", complement and term complement range
    // over: every symbol that may occur in a string.  Epsilon, ANY and the
    // reserved boundary placeholder are excluded; the boundary only exists
    // inside marker names, never as a string symbol.
    std::vector<SymbolId> sigma() const;

    // All ids of one kind.
    std::vector<SymbolId> ids_of_kind(SymbolKind kind) const;

    // Marker helpers.  Marker names are `<base>-B<k>` / `<base>-A<k>` with
    // k >= 1; base is a tag name, a class name, or "<#>".
    SymbolId intern_marker(SymbolId base, bool look_back, unsigned distance);
    static std::string marker_name(const std::string& base, bool look_back, unsigned distance);
    // Parses a marker name; returns false if `name` is not of marker shape.
    static bool parse_marker_name(const std::string& name, std::string* base,
                                  bool* look_back, unsigned* distance);

    bool operator==(const SymbolTable& other) const;

private:
    std::unordered_map<std::string, SymbolId> by_name_;
    std::vector<std::string> names_;
    std::vector<SymbolKind> kinds_;
    bool frozen_ = false;
};

using SymbolTablePtr = std::shared_ptr<const SymbolTable>;

// Two automata may be combined only when they share an alphabet: either the
// same table object or structurally equal ones.
bool compatible(const SymbolTablePtr& a, const SymbolTablePtr& b);

} // namespace bfst

#endif
