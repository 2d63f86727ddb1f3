#ifndef BFST_FST_IO_HPP
#define BFST_FST_IO_HPP

#include <iosfwd>
#include <string>

#include "bfst/fst.hpp"

namespace bfst {

// Text serialization, format "FSTv1":
//   FSTv1
//   symbol <id> <kind> <name>
//   arc <src> <dst> <upperName> <lowerName>
//   final <state>
// Epsilon is spelled <eps>, the boundary <#>.  Writing renumbers states
// breadth-first from the initial state, so state 0 is always initial and
// save -> load -> save is bit-exact.
void write_fst(std::ostream& os, const Fst& fst);
Fst read_fst(std::istream& is, const std::string& filename = "<stream>");

void save_fst(const std::string& path, const Fst& fst);
Fst load_fst(const std::string& path);

std::string fst_to_string(const Fst& fst);

} // namespace bfst

#endif
