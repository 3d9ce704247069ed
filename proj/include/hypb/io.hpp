#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hypb/energy.hpp"
#include "hypb/estimates.hpp"
#include "hypb/minmax.hpp"
#include "hypb/profile.hpp"
#include "hypb/quadrature.hpp"

namespace hypb::io {

// Insertion-ordered documents so reruns serialize byte-identically.
using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// RFC-4180 quoting: fields holding commas, quotes or newlines are wrapped
// in double quotes with embedded quotes doubled.
std::string csv_field(const std::string& raw);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_text(const std::filesystem::path& path, const std::string& body);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
void write_json(const std::filesystem::path& path, const json& doc);
json read_json(const std::filesystem::path& path);

// Whitespace-separated two-column series for plotting tools.
void write_plot(const std::filesystem::path& path,
                const std::vector<std::pair<double, double>>& points);

json params_json(const ModelParams& params);
ModelParams params_from_json(const json& doc);

json quadrature_json(const QuadratureSpec& spec);
QuadratureSpec quadrature_from_json(const json& doc, QuadratureSpec base = {});

json coefficient_json(const CoefficientField& a);
CoefficientField coefficient_from_json(const json& doc);

// Profile round-trip: a (rho, w) table plus a header carrying the model
// parameters, the fitted tail, and the solver diagnostics. Loading rebuilds
// derivatives by finite differences, so interpolated values between nodes
// may differ from the solver's by O(step^3).
void save_profile(const RadialProfile& profile,
                  const std::filesystem::path& table_path,
                  const std::filesystem::path& header_path);
RadialProfile load_profile(const std::filesystem::path& table_path,
                           const std::filesystem::path& header_path);

json energy_report_json(const EnergyReport& report);

CsvTable interaction_csv(const InteractionFit& fit);
json interaction_fit_json(const InteractionFit& fit, const ModelParams& params);

CsvTable sweep_csv(const SweepReport& report);
json sweep_summary_json(const SweepReport& report, const LemmaSweepConfig& cfg,
                        const QuadratureSpec& spec,
                        const RadialProfile& profile);

CsvTable minmax_csv(const MinmaxReport& report);
json minmax_json(const MinmaxReport& report, const PathConfig& cfg);

}  // namespace hypb::io
