#pragma once

// Access to the bundled data files.

#include <fstream>
#include <sstream>
#include <string>

namespace dps::testdata {

inline std::string path(const std::string& name) { return std::string(DPS_DATA_DIR) + "/" + name; }

inline std::string read(const std::string& name) {
  std::ifstream in(path(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dps::testdata
