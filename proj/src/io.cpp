#include "lattice/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lattice {

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ResourceError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ValidationError("cannot move output into place: " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Potential potential_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("potential file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("d") || !j.contains("entries") || !j["d"].is_number_integer() ||
      !j["entries"].is_array())
    throw ValidationError("potential file needs integer \"d\" and array \"entries\"");
  const int d = j["d"].get<int>();
  std::vector<std::pair<LatticePoint, double>> entries;
  for (const auto& e : j["entries"]) {
    if (!e.is_object() || !e.contains("n") || !e.contains("v") || !e["n"].is_array() || !e["v"].is_number())
      throw ValidationError("each entry needs an integer array \"n\" and a number \"v\"");
    std::vector<int> c;
    for (const auto& x : e["n"]) {
      if (!x.is_number_integer()) throw ValidationError("lattice coordinates must be integers");
      c.push_back(x.get<int>());
    }
    entries.push_back({LatticePoint(c), e["v"].get<double>()});
  }
  return Potential(d, entries);
}

std::string potential_to_json(const Potential& v) {
  nlohmann::json j;
  j["d"] = v.dim();
  j["entries"] = nlohmann::json::array();
  for (const auto& [n, x] : v.entries()) j["entries"].push_back({{"n", n.coords()}, {"v", x}});
  return j.dump(2) + "\n";
}

Potential load_potential(const std::string& path) { return potential_from_json(read_file(path)); }

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lattice
