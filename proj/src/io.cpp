#include "eigenbound/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eigenbound::io {

std::string format_g17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string json_number(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  return format_g17(v);
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string bound_report_json(const lb::BoundReport& report) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"value\": " << json_number(report.value) << ",\n";
  os << "  \"constant_mode\": \"" << json_escape(report.constant_mode) << "\",\n";
  os << "  \"constant\": " << json_number(report.constant) << ",\n";
  os << "  \"witness\": ";
  if (report.witness_set) {
    os << "{\"type\": \"index_set\", \"members\": [";
    bool first = true;
    for (int i : *report.witness_set) {
      if (!first) os << ", ";
      os << i;
      first = false;
    }
    os << "]}";
  } else if (!report.witness_tuning.empty()) {
    os << "{\"type\": \"tuning\", \"params\": {";
    bool first = true;
    for (const auto& [k, v] : report.witness_tuning) {
      if (!first) os << ", ";
      os << "\"" << json_escape(k) << "\": " << json_number(v);
      first = false;
    }
    os << "}}";
  } else {
    os << "null";
  }
  os << ",\n";
  if (!report.witness_tuning.empty() && report.witness_set) {
    os << "  \"witness_tuning\": {";
    bool first = true;
    for (const auto& [k, v] : report.witness_tuning) {
      if (!first) os << ", ";
      os << "\"" << json_escape(k) << "\": " << json_number(v);
      first = false;
    }
    os << "},\n";
  }
  os << "  \"per_pair_terms\": [";
  for (std::size_t k = 0; k < report.per_pair_terms.size(); ++k) {
    const auto& e = report.per_pair_terms[k];
    if (k) os << ", ";
    os << "{\"i\": " << e.i << ", \"j\": " << e.j
       << ", \"term\": " << json_number(e.term) << "}";
  }
  os << "],\n";
  os << "  \"truncation\": {\"truncated\": "
     << (report.truncation.truncated ? "true" : "false")
     << ", \"p\": " << report.truncation.p << ", \"source\": \""
     << json_escape(report.truncation.source) << "\"},\n";
  os << "  \"flags\": [";
  for (std::size_t k = 0; k < report.flags.size(); ++k) {
    if (k) os << ", ";
    os << "\"" << json_escape(report.flags[k]) << "\"";
  }
  os << "],\n";
  os << "  \"note\": \"" << json_escape(report.note) << "\"\n";
  os << "}\n";
  return os.str();
}

std::string per_pair_csv(const std::vector<lb::PairTermEntry>& terms) {
  std::ostringstream os;
  os << "i,j,term\n";
  for (const auto& e : terms) {
    os << e.i << "," << e.j << "," << format_g17(e.term) << "\n";
  }
  return os.str();
}

std::string risk_grid_csv(const std::vector<RiskGridRow>& rows) {
  std::ostringstream os;
  os << "n,mean,se,n_times_mean\n";
  for (const auto& r : rows) {
    os << r.n << "," << format_g17(r.mean) << "," << format_g17(r.se) << ","
       << format_g17(static_cast<double>(r.n) * r.mean) << "\n";
  }
  return os.str();
}

std::string losses_csv(const std::vector<double>& losses) {
  std::ostringstream os;
  os << "replicate,loss\n";
  for (std::size_t k = 0; k < losses.size(); ++k) {
    os << k << "," << format_g17(losses[k]) << "\n";
  }
  return os.str();
}

std::string chain_diagnostics_csv(const prior::ChainDiagnostics& diag) {
  std::ostringstream os;
  os << "sample,tr_u,acceptance_rate\n";
  const std::size_t m =
      std::min(diag.trace_series.size(), diag.acceptance_series.size());
  for (std::size_t k = 0; k < m; ++k) {
    os << k << "," << format_g17(diag.trace_series[k]) << ","
       << format_g17(diag.acceptance_series[k]) << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("io: cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("io: write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("io: cannot open for reading: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace eigenbound::io
