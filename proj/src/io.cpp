#include "gfa/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gfa/errors.hpp"
#include "gfa/version.hpp"

namespace gfa::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest_hex(const std::string& data) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(data)));
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot open " + tmp);
    out << content;
    if (!out) throw Error(ErrorCode::ConfigError, "write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error(ErrorCode::ConfigError, "rename failed: " + path);
}

std::string ccdf_csv(const DelayDistribution& dist, double tti_seconds) {
  std::ostringstream out;
  out << "t_tti,t_ms,ccdf\n";
  for (size_t k = 0; k < dist.ccdf.size(); ++k) {
    const double t = static_cast<double>(k) * dist.grid_step;
    out << fmt(t) << ',' << fmt(t * tti_seconds * 1000.0) << ',' << fmt(dist.ccdf[k]) << '\n';
  }
  return out.str();
}

std::string compare_csv(const DelayDistribution& analytic, const DelayDistribution& empirical) {
  std::ostringstream out;
  out << "t_tti,ccdf_analytic,ccdf_empirical,rel_gap\n";
  const size_t n = std::min(analytic.ccdf.size(), empirical.ccdf.size());
  for (size_t k = 0; k < n; ++k) {
    const double a = analytic.ccdf[k];
    const double e = empirical.ccdf[k];
    const double denom = std::max(a, e);
    const double gap = denom > 0.0 ? std::abs(a - e) / denom : 0.0;
    out << fmt(static_cast<double>(k) * analytic.grid_step) << ',' << fmt(a) << ',' << fmt(e)
        << ',' << fmt(gap) << '\n';
  }
  return out.str();
}

std::string table_csv(const std::vector<TableEntry>& table, SizingModel model) {
  std::ostringstream out;
  out << "n_ues,b_star,model,outage_at_b_star,reason\n";
  for (const auto& e : table) {
    out << e.n_ues << ',';
    if (e.result.feasible())
      out << *e.result.b_star << ',' << to_string(model) << ','
          << fmt(e.result.outage_at_b_star) << ",\n";
    else
      out << ',' << to_string(model) << ",," << e.result.reason << '\n';
  }
  return out.str();
}

std::string histogram_csv(const SimStats& stats) {
  std::ostringstream out;
  out << "bin_lo_tti,count\n";
  for (size_t b = 0; b < stats.delay_histogram.size(); ++b) {
    if (stats.delay_histogram[b] == 0) continue;
    out << fmt((static_cast<double>(b) - 1.0) * stats.bin_step) << ','
        << stats.delay_histogram[b] << '\n';
  }
  return out.str();
}

std::string churn_csv(const SimStats& stats) {
  std::ostringstream out;
  out << "tti,n_ues,n_rbs\n";
  for (const auto& [tti, n, b] : stats.churn_log) out << tti << ',' << n << ',' << b << '\n';
  return out.str();
}

std::string delays_csv(const SimStats& stats) {
  std::ostringstream out;
  out << "delay_tti\n";
  for (const auto& s : stats.samples) out << fmt(s.delay) << '\n';
  return out.str();
}

std::map<int, int> parse_table_csv(const std::string& content) {
  std::map<int, int> table;
  std::istringstream in(content);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string n_s, b_s;
    std::getline(row, n_s, ',');
    std::getline(row, b_s, ',');
    if (n_s.empty() || b_s.empty()) continue;
    try {
      table[std::stoi(n_s)] = std::stoi(b_s);
    } catch (...) {
      throw Error(ErrorCode::ConfigError, "bad table row: " + line);
    }
  }
  return table;
}

std::string RunManifest::to_json() const {
  std::ostringstream out;
  out << "{\n  \"tool\": \"gfa-lab\",\n  \"version\": \"" << version << "\",\n";
  out << "  \"command\": \"" << command << "\",\n  \"params\": {\n";
  for (size_t i = 0; i < params.size(); ++i) {
    out << "    \"" << params[i].first << "\": \"" << params[i].second << "\""
        << (i + 1 < params.size() ? "," : "") << '\n';
  }
  out << "  },\n  \"outputs\": {\n";
  size_t i = 0;
  for (const auto& [file, digest] : output_digests) {
    out << "    \"" << file << "\": \"" << digest << "\""
        << (++i < output_digests.size() ? "," : "") << '\n';
  }
  out << "  }\n}\n";
  return out.str();
}

}  // namespace gfa::io
