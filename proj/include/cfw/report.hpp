#pragma once

// Deterministic text artifacts: CSV grid exports, JSON reports, and the
// output manifest with content hashes.

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "cfw/lax.hpp"

namespace cfw {

std::uint64_t fnv1a(const std::string& data);

// Shortest fixed-format float text (deterministic across runs).
std::string format_double(double x);

// Header `x1,x2[,t],re_0_0,im_0_0,...`; one row per node, row-major entries.
std::string csv_of_field(const GridField& f);

// Same schema with a trailing-time column prepended after the coordinates.
std::string csv_of_time_fields(const std::vector<GridField>& f,
                               const std::vector<double>& times);

// Scalar time series: header `t,value`.
std::string csv_of_series(const std::vector<double>& times,
                          const std::vector<double>& values);

class OutputWriter {
 public:
  explicit OutputWriter(std::string dir);
  void write(const std::string& name, const std::string& content);
  // Writes manifest.json listing every file with size and fnv1a hash.
  void write_manifest();

 private:
  std::string dir_;
  std::vector<std::tuple<std::string, std::size_t, std::uint64_t>> entries_;
};

}  // namespace cfw
