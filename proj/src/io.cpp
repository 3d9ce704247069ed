#include "hypb/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace hypb::io {

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error("malformed number in table: '" + s + "'");
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

void require_keys(const json& doc, const char* what,
                  std::initializer_list<const char*> allowed) {
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw std::runtime_error(std::string("unknown key '") + item.key() +
                               "' in " + what);
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  auto out = open_out(path);
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ostringstream body;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) body << ',';
    body << csv_field(table.header[i]);
  }
  body << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw std::runtime_error("csv row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) body << ',';
      body << csv_field(row[i]);
    }
    body << '\n';
  }
  write_text(path, body.str());
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("invalid JSON in " + path.string() + ": " +
                             e.what());
  }
  return doc;
}

void write_plot(const std::filesystem::path& path,
                const std::vector<std::pair<double, double>>& points) {
  std::ostringstream body;
  for (const auto& [x, y] : points)
    body << format_double(x) << ' ' << format_double(y) << '\n';
  write_text(path, body.str());
}

json params_json(const ModelParams& params) {
  return json{{"dim", params.dim}, {"p", params.p}, {"lambda", params.lambda}};
}

ModelParams params_from_json(const json& doc) {
  require_keys(doc, "params", {"dim", "p", "lambda"});
  ModelParams params;
  if (doc.contains("dim")) params.dim = doc.at("dim").get<int>();
  if (doc.contains("p")) params.p = doc.at("p").get<double>();
  if (doc.contains("lambda")) params.lambda = doc.at("lambda").get<double>();
  params.validate();
  return params;
}

json quadrature_json(const QuadratureSpec& spec) {
  return json{{"rho_max", spec.rho_max},
              {"n_radial", spec.n_radial},
              {"n_angular", spec.n_angular},
              {"rule", spec.rule},
              {"angular_floor", spec.angular_floor},
              {"center_graded", spec.center_graded}};
}

QuadratureSpec quadrature_from_json(const json& doc, QuadratureSpec base) {
  require_keys(doc, "quadrature",
               {"rho_max", "n_radial", "n_angular", "rule", "angular_floor",
                "center_graded"});
  if (doc.contains("rho_max")) base.rho_max = doc.at("rho_max").get<double>();
  if (doc.contains("n_radial")) base.n_radial = doc.at("n_radial").get<int>();
  if (doc.contains("n_angular"))
    base.n_angular = doc.at("n_angular").get<int>();
  if (doc.contains("rule")) base.rule = doc.at("rule").get<std::string>();
  if (doc.contains("angular_floor"))
    base.angular_floor = doc.at("angular_floor").get<double>();
  if (doc.contains("center_graded"))
    base.center_graded = doc.at("center_graded").get<bool>();
  base.validate();
  return base;
}

json coefficient_json(const CoefficientField& a) {
  switch (a.kind()) {
    case CoefficientField::Kind::Unit:
      return json{{"kind", "unit"}};
    case CoefficientField::Kind::ExpDefect:
      return json{{"kind", "exp_defect"},
                  {"amplitude", a.C()},
                  {"rate", a.delta()}};
    case CoefficientField::Kind::RadialTable:
      return json{
          {"kind", "radial_table"}, {"grid", a.grid()}, {"values", a.table()}};
  }
  throw std::logic_error("unhandled coefficient kind");
}

CoefficientField coefficient_from_json(const json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "unit") {
    require_keys(doc, "coefficient", {"kind"});
    return CoefficientField::unit();
  }
  if (kind == "exp_defect") {
    require_keys(doc, "coefficient", {"kind", "amplitude", "rate"});
    return CoefficientField::exp_defect(doc.at("amplitude").get<double>(),
                                        doc.at("rate").get<double>());
  }
  if (kind == "radial_table") {
    require_keys(doc, "coefficient", {"kind", "grid", "values"});
    return CoefficientField::radial_table(
        doc.at("grid").get<std::vector<double>>(),
        doc.at("values").get<std::vector<double>>());
  }
  throw std::runtime_error("unknown coefficient kind '" + kind + "'");
}

void save_profile(const RadialProfile& profile,
                  const std::filesystem::path& table_path,
                  const std::filesystem::path& header_path) {
  CsvTable table;
  table.header = {"rho", "w"};
  table.rows.reserve(profile.grid_size());
  for (std::size_t i = 0; i < profile.grid_size(); ++i)
    table.rows.push_back({format_double(profile.grid_node(i)),
                          format_double(profile.values()[i])});
  write_csv(table_path, table);

  const SolveDiagnostics& diag = profile.diagnostics();
  json header{
      {"schema_version", kSchemaVersion},
      {"params", params_json(profile.params())},
      {"w0", profile.w0()},
      {"grid", json{{"step", profile.grid_step()},
                    {"end", profile.grid_end()},
                    {"size", profile.grid_size()}}},
      {"tail", json{{"amplitude", profile.tail_amplitude()},
                    {"exponent", profile.tail_exponent()}}},
      {"diagnostics", json{{"residual_sup", diag.residual_sup},
                           {"end_log_slope", diag.end_log_slope},
                           {"tail_fit_rms", diag.tail_fit_rms},
                           {"bracket_lo", diag.bracket_lo},
                           {"bracket_hi", diag.bracket_hi},
                           {"bisect_steps", diag.bisect_steps},
                           {"shoot_end", diag.shoot_end},
                           {"uniqueness_caveat", diag.uniqueness_caveat},
                           {"note", diag.note}}}};
  write_json(header_path, header);
}

RadialProfile load_profile(const std::filesystem::path& table_path,
                           const std::filesystem::path& header_path) {
  json header = read_json(header_path);
  ModelParams params = params_from_json(header.at("params"));
  const double amplitude = header.at("tail").at("amplitude").get<double>();
  const double exponent = header.at("tail").at("exponent").get<double>();

  std::ifstream in(table_path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open for reading: " + table_path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("rho,w", 0) != 0)
    throw std::runtime_error("profile table must start with a rho,w header");
  std::vector<double> grid, values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("profile table row missing a comma");
    grid.push_back(parse_double(line.substr(0, comma)));
    values.push_back(parse_double(line.substr(comma + 1)));
  }
  return RadialProfile::from_table(params, std::move(grid), std::move(values),
                                   amplitude, exponent);
}

json energy_report_json(const EnergyReport& report) {
  return json{{"norm_sq_lambda", report.norm_sq_lambda},
              {"nonlinear_a", report.nonlinear_a},
              {"nonlinear_unit", report.nonlinear_unit},
              {"defect", report.defect},
              {"J", report.J},
              {"J_inf", report.J_inf},
              {"I", report.I},
              {"tail_norm", report.tail_norm},
              {"tail_nonlinear", report.tail_nonlinear}};
}

CsvTable interaction_csv(const InteractionFit& fit) {
  CsvTable table;
  table.header = {"separation", "interaction", "scaled"};
  for (std::size_t i = 0; i < fit.separations.size(); ++i)
    table.rows.push_back({format_double(fit.separations[i]),
                          format_double(fit.values[i]),
                          format_double(fit.scaled[i])});
  return table;
}

json interaction_fit_json(const InteractionFit& fit,
                          const ModelParams& params) {
  const double c = params.decay_rate();
  return json{{"schema_version", kSchemaVersion},
              {"params", params_json(params)},
              {"separations", fit.separations},
              {"fitted_exponent", fit.fitted_exponent},
              {"decay_rate", c},
              {"eps", fit.eps},
              {"exponent_range", json::array({-(c + fit.eps), -(c - fit.eps)})},
              {"exponent_in_range", fit.exponent_in_range},
              {"scaled_min", fit.scaled_min},
              {"positive_lower_bound", fit.positive_lower_bound}};
}

CsvTable sweep_csv(const SweepReport& report) {
  CsvTable table;
  table.header = {"t",           "separation",
                  "center_rho_far", "center_rho_near",
                  "J",           "J_inf",
                  "S2",          "margin",
                  "interaction", "defect",
                  "defect_over_interaction", "in_window",
                  "skipped",     "skip_reason"};
  for (const SweepRow& row : report.rows)
    table.rows.push_back({format_double(row.t),
                          format_double(row.separation),
                          format_double(row.center_rhos.first),
                          format_double(row.center_rhos.second),
                          format_double(row.J_value),
                          format_double(row.J_inf),
                          format_double(row.S2),
                          format_double(row.margin),
                          format_double(row.interaction),
                          format_double(row.defect),
                          format_double(row.defect_over_interaction),
                          row.in_window ? "true" : "false",
                          row.skipped ? "true" : "false",
                          row.skip_reason});
  return table;
}

json sweep_summary_json(const SweepReport& report, const LemmaSweepConfig& cfg,
                        const QuadratureSpec& spec,
                        const RadialProfile& profile) {
  std::size_t skipped = 0, outside = 0;
  for (const SweepRow& row : report.rows) {
    if (row.skipped) ++skipped;
    if (!row.in_window) ++outside;
  }
  json endpoints = json::array();
  for (const SweepEndpoint& e : report.endpoints)
    endpoints.push_back(json{
        {"separation", e.separation},
        {"center_rho_far", e.center_rhos.first},
        {"center_rho_near", e.center_rhos.second},
        {"J0_rel", e.J0_rel},
        {"J1_rel", e.J1_rel},
        {"argmax_t", e.argmax_t},
        {"max_J", e.max_J}});
  return json{
      {"schema_version", kSchemaVersion},
      {"params", params_json(cfg.params)},
      {"coefficient", coefficient_json(cfg.a)},
      {"config", json{{"K", cfg.K_or_default()},
                      {"alpha", cfg.alpha},
                      {"alpha_prime", cfg.alpha_prime},
                      {"R", cfg.R},
                      {"center_rhos", cfg.center_rhos},
                      {"separations", cfg.separations},
                      {"t_count", cfg.t_grid_or_default().size()},
                      {"strict_regime", cfg.strict_regime}}},
      {"S1", report.S1},
      {"S2", report.S2},
      {"min_margin", report.min_margin},
      {"delta_window",
       json::array({report.delta_window.first, report.delta_window.second})},
      {"delta_in_window", report.delta_in_window},
      {"rows", report.rows.size()},
      {"rows_skipped", skipped},
      {"rows_outside_window", outside},
      {"endpoints", endpoints},
      {"warnings", report.warnings},
      {"quadrature", quadrature_json(spec)},
      {"profile", json{{"w0", profile.w0()},
                       {"tail_amplitude", profile.tail_amplitude()},
                       {"tail_exponent", profile.tail_exponent()},
                       {"residual_sup", profile.diagnostics().residual_sup}}}};
}

CsvTable minmax_csv(const MinmaxReport& report) {
  CsvTable table;
  table.header = {"t", "J", "margin", "m_first_coordinate"};
  for (const PathSample& s : report.samples)
    table.rows.push_back({format_double(s.t), format_double(s.J),
                          format_double(s.margin), format_double(s.m1)});
  return table;
}

json minmax_json(const MinmaxReport& report, const PathConfig& cfg) {
  return json{
      {"schema_version", kSchemaVersion},
      {"params", params_json(cfg.params)},
      {"coefficient", coefficient_json(cfg.a)},
      {"config", json{{"R2", cfg.R2},
                      {"x2_rho", cfg.x2_or_default()},
                      {"alpha", cfg.alpha},
                      {"alpha_prime", cfg.alpha_prime},
                      {"t_count", cfg.t_grid_or_default().size()},
                      {"boundary_samples", cfg.boundary_samples}}},
      {"S1", report.S1},
      {"S2", report.S2},
      {"boundary_max_J", report.boundary_max_J},
      {"path_max_J", report.path_max_J},
      {"path_argmax_t", report.path_argmax_t},
      {"interior_max", report.interior_max},
      {"bracket_ok", report.bracket_ok},
      {"sign_change", report.sign_change},
      {"m_boundary_pos", report.m_boundary_pos},
      {"m_boundary_neg", report.m_boundary_neg},
      {"boundary_spread", report.boundary_spread},
      {"samples", report.samples.size()}};
}

}  // namespace hypb::io
