#include "cfw/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace cfw {

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::string csv_header(const Grid& g, int n, bool with_time) {
  std::string h;
  for (int k = 0; k < g.r; ++k) h += "x" + std::to_string(k + 1) + ",";
  if (with_time) h += "t,";
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      h += "re_" + std::to_string(r) + "_" + std::to_string(c) + ",im_" +
           std::to_string(r) + "_" + std::to_string(c);
      if (!(r == n - 1 && c == n - 1)) h += ",";
    }
  return h + "\n";
}

void append_row(std::string& out, const Grid& g, long fl, const Mat& m,
                const double* t) {
  const auto x = g.coords(fl);
  for (double xi : x) out += format_double(xi) + ",";
  if (t) out += format_double(*t) + ",";
  const int n = int(m.rows());
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      out += format_double(m(r, c).real()) + "," + format_double(m(r, c).imag());
      if (!(r == n - 1 && c == n - 1)) out += ",";
    }
  out += "\n";
}

}  // namespace

std::string csv_of_field(const GridField& f) {
  std::string out = csv_header(f.grid, f.n, false);
  for (long fl = 0; fl < f.grid.num_nodes(); ++fl)
    append_row(out, f.grid, fl, f.v[fl], nullptr);
  return out;
}

std::string csv_of_time_fields(const std::vector<GridField>& f,
                               const std::vector<double>& times) {
  if (f.empty()) return "";
  std::string out = csv_header(f[0].grid, f[0].n, true);
  for (size_t m = 0; m < f.size(); ++m)
    for (long fl = 0; fl < f[m].grid.num_nodes(); ++fl)
      append_row(out, f[m].grid, fl, f[m].v[fl], &times[m]);
  return out;
}

std::string csv_of_series(const std::vector<double>& times,
                          const std::vector<double>& values) {
  std::string out = "t,value\n";
  for (size_t m = 0; m < times.size(); ++m)
    out += format_double(times[m]) + "," + format_double(values[m]) + "\n";
  return out;
}

OutputWriter::OutputWriter(std::string dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

void OutputWriter::write(const std::string& name, const std::string& content) {
  std::ofstream f(std::filesystem::path(dir_) / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + name + " in " + dir_);
  f << content;
  entries_.emplace_back(name, content.size(), fnv1a(content));
}

void OutputWriter::write_manifest() {
  nlohmann::ordered_json m;
  m["files"] = nlohmann::ordered_json::array();
  for (const auto& [name, bytes, hash] : entries_) {
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(hash));
    m["files"].push_back({{"name", name}, {"bytes", bytes}, {"fnv1a", hex}});
  }
  std::ofstream f(std::filesystem::path(dir_) / "manifest.json",
                  std::ios::binary);
  f << m.dump(2) << "\n";
}

}  // namespace cfw
