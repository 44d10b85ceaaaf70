#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include "ambig/app.hpp"
#include "ambig/error.hpp"

namespace ambig::app {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string file_sha256(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file for digest: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

RunManifest::RunManifest(std::string command, const RunConfig& cfg)
    : command_(std::move(command)), config_hash_(cfg.hash()), seed_(cfg.seed), timestamps_(cfg.timestamps) {}

void RunManifest::add_input(const fs::path& path) {
  for (const auto& [p, d] : inputs_) {
    if (p == path.string()) return;
  }
  inputs_.emplace_back(path.string(), file_sha256(path));
}

fs::path RunManifest::write_output(const fs::path& dir, const std::string& name, std::string_view content) {
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write output: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  outputs_.emplace_back(name, sha256_hex(content));
  return path;
}

void RunManifest::warn(std::string message) { warnings_.push_back(std::move(message)); }

void RunManifest::time(const std::string& stage, std::chrono::steady_clock::duration elapsed) {
  timings_ms_.emplace_back(stage, std::chrono::duration<double, std::milli>(elapsed).count());
}

std::string RunManifest::to_json() const {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& [p, d] : inputs_) inputs.push_back({{"path", p}, {"sha256", d}});
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& [p, d] : outputs_) outputs.push_back({{"path", p}, {"sha256", d}});
  nlohmann::json data = {{"inputs", inputs}, {"outputs", outputs}, {"warnings", warnings_}};
  if (timestamps_) {
    nlohmann::json timings = nlohmann::json::object();
    for (const auto& [stage, ms] : timings_ms_) timings[stage] = ms;
    data["timings_ms"] = timings;
  }
  nlohmann::json meta = {{"tool", "ambig"},
                         {"tool_version", std::string(kToolVersion)},
                         {"command", command_},
                         {"config_hash", config_hash_},
                         {"seed", seed_}};
  return nlohmann::json{{"meta", meta}, {"data", data}}.dump(2) + "\n";
}

fs::path RunManifest::write(const fs::path& dir) const {
  fs::create_directories(dir);
  const auto path = dir / ("manifest_" + command_ + ".json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write manifest: " + path.string());
  out << to_json();
  return path;
}

}  // namespace ambig::app
