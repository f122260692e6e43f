#ifndef NEUMANN_IO_HPP
#define NEUMANN_IO_HPP

#include <ostream>
#include <string>

namespace neumann::io {

// Decimal with 17 significant digits; round-trips doubles exactly.
std::string fmt(double v);

// Emits each line of `metadata` as a leading "# " comment.
void write_metadata_comments(std::ostream& out, const std::string& metadata);

}  // namespace neumann::io

#endif
