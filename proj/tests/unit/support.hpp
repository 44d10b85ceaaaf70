#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ambig/embed.hpp"

namespace test {

inline const std::filesystem::path kFixtures = AMBIG_TEST_FIXTURES;
inline const std::filesystem::path kData = AMBIG_TEST_DATA;

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Fresh scratch directory under the build tree, removed on construction.
inline std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::current_path() / "scratch" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline ambig::embed::EmbeddingSpace make_space(
    std::initializer_list<std::pair<std::string, std::vector<float>>> entries, std::string id = "test") {
  const auto dim = entries.begin()->second.size();
  ambig::embed::EmbeddingSpace space(std::move(id), dim);
  for (const auto& [w, v] : entries) space.add(w, v);
  return space;
}

}  // namespace test
