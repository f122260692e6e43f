#include "neumann/io.hpp"

#include <cstdio>
#include <sstream>

namespace neumann::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_metadata_comments(std::ostream& out, const std::string& metadata) {
  if (metadata.empty()) return;
  std::istringstream ss(metadata);
  std::string line;
  while (std::getline(ss, line)) out << "# " << line << "\n";
}

}  // namespace neumann::io
