#pragma once

#include <string>
#include <vector>

#include "eigenbound/bounds.hpp"
#include "eigenbound/gibbs_prior.hpp"
#include "eigenbound/risk_sim.hpp"

namespace eigenbound::io {

// 17-significant-digit decimal rendering: doubles survive a write/parse
// round trip bit-exactly, making output files replayable.
std::string format_g17(double v);

// JSON number token; non-finite values are emitted as the strings "inf",
// "-inf", "nan" (plain JSON has no literals for them).
std::string json_number(double v);

std::string json_escape(const std::string& s);

// Serialization of a bound report (schemas/bound_report.schema.json).
std::string bound_report_json(const lb::BoundReport& report);

// CSV emitters. Column order is fixed; all floats use format_g17.
std::string per_pair_csv(const std::vector<lb::PairTermEntry>& terms);
struct RiskGridRow {
  std::int64_t n = 0;
  double mean = 0.0;
  double se = 0.0;
};
std::string risk_grid_csv(const std::vector<RiskGridRow>& rows);
std::string losses_csv(const std::vector<double>& losses);
std::string chain_diagnostics_csv(const prior::ChainDiagnostics& diag);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace eigenbound::io
