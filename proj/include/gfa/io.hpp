#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gfa/des.hpp"
#include "gfa/mg1.hpp"
#include "gfa/sizing.hpp"

namespace gfa::io {

// deterministic shortest-ish float formatting for CSV output
std::string fmt(double v);

uint64_t fnv1a(const std::string& data);
std::string digest_hex(const std::string& data);

// write via temp file + rename so partial results never land
void write_file_atomic(const std::string& path, const std::string& content);

std::string ccdf_csv(const DelayDistribution& dist, double tti_seconds);
std::string compare_csv(const DelayDistribution& analytic, const DelayDistribution& empirical);
std::string table_csv(const std::vector<TableEntry>& table, SizingModel model);
std::string histogram_csv(const SimStats& stats);
std::string churn_csv(const SimStats& stats);
std::string delays_csv(const SimStats& stats);

// parse a table CSV produced by table_csv back into an N -> B* map;
// infeasible rows are skipped
std::map<int, int> parse_table_csv(const std::string& content);

struct RunManifest {
  std::string command;
  std::string version;
  std::vector<std::pair<std::string, std::string>> params;  // resolved flag set
  std::map<std::string, std::string> output_digests;
  std::string to_json() const;
};

}  // namespace gfa::io
