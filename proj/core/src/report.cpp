#include "delaystab/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "delaystab/errors.hpp"

namespace delaystab {

namespace {

using json = nlohmann::json;

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json fractions(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

json matrix_json(const Matrix<Rational>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string certificate_json(const ModelCertificate& mc) {
  const StabilityCertificate& c = mc.certificate;
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["verdict"] = std::string(to_string(c.verdict));
  doc["route"] = c.route;
  doc["per_row_margin"] = numbers(c.per_row_margin);
  doc["exact_margin"] = c.exact_margin;
  doc["witness_d"] = c.witness_d ? numbers(*c.witness_d) : json(nullptr);
  doc["exact_witness_d"] = c.exact_witness_d;
  doc["mu"] = number(c.mu);
  doc["nu"] = numbers(c.nu);
  doc["c"] = number(c.c);
  doc["zeta"] = number(c.zeta);
  doc["C"] = number(c.C);
  doc["C_original"] = number(c.C_original);
  doc["lambda_bound"] = number(c.lambda_bound);
  doc["lambda_numeric"] = number(c.lambda_numeric);
  doc["tail_allowance"] = number(c.tail_allowance);
  doc["tau"] = mc.tau;
  doc["r"] = mc.window_start;
  doc["period"] = mc.period ? json(*mc.period) : json(nullptr);

  json matrix;
  matrix["name"] = mc.matrix_name;
  matrix["entries"] = matrix_json(mc.matrix);
  matrix["is_z_matrix"] = mc.matrix_report.is_z_matrix;
  matrix["leading_minors"] = fractions(mc.matrix_report.leading_minors);
  matrix["is_nonsingular_m"] = mc.matrix_report.is_nonsingular_m;
  matrix["witness_d"] = mc.matrix_report.witness_d ? fractions(*mc.matrix_report.witness_d)
                                                   : json(nullptr);
  matrix["note"] = mc.matrix_report.note;
  doc["matrix"] = std::move(matrix);

  json lip;
  lip["H"] = matrix_json(mc.lipschitz.H);
  lip["c_plus"] = fractions(mc.lipschitz.c_plus);
  doc["lipschitz"] = std::move(lip);
  return doc.dump(2) + "\n";
}

std::string matrix_to_string(const Matrix<Rational>& m) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) out += "; ";
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ", ";
      out += to_string(m(r, c));
    }
  }
  return out + "]";
}

std::string certificate_summary(const ModelCertificate& mc) {
  const StabilityCertificate& c = mc.certificate;
  std::ostringstream s;
  s << "verdict: " << to_string(c.verdict) << " (route " << c.route << ")\n";
  s << mc.matrix_name << " = " << matrix_to_string(mc.matrix) << "\n";
  s << "leading minors:";
  for (const auto& v : mc.matrix_report.leading_minors) s << " " << to_string(v);
  s << "\n";
  if (!mc.matrix_report.note.empty()) s << "note: " << mc.matrix_report.note << "\n";
  if (mc.witness) {
    s << "witness d:";
    for (const auto& v : *mc.witness) s << " " << to_string(v);
    s << "\n";
  }
  s << "row margins:";
  if (!c.exact_margin.empty())
    for (const auto& v : c.exact_margin) s << " " << v;
  else
    for (double v : c.per_row_margin) s << " " << format_double(v);
  s << "\n";
  if (c.certified()) {
    s << "mu = " << format_double(c.mu) << ", c = " << format_double(c.c)
      << ", zeta = " << format_double(c.zeta) << "\n";
    s << "C = " << format_double(c.C) << ", C_original = " << format_double(c.C_original) << "\n";
    s << "lambda_bound = " << format_double(c.lambda_bound)
      << ", lambda_numeric = " << format_double(c.lambda_numeric)
      << ", tail = " << format_double(c.tail_allowance) << "\n";
  }
  return s.str();
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, Step from, Step to) {
  out << "# format_version: " << kFormatVersion << "\n";
  out << "m";
  for (std::size_t i = 0; i < traj.n_channels(); ++i) out << ",x_" << (i + 1);
  out << "\n";
  for (Step m = from; m <= to; ++m) {
    out << m;
    for (std::size_t i = 0; i < traj.n_channels(); ++i) out << "," << format_double(traj.value(i, m));
    out << "\n";
  }
}

void write_bound_csv(std::ostream& out, const std::vector<BoundSample>& series) {
  out << "# format_version: " << kFormatVersion << "\n";
  out << "m,bound,observed,slack\n";
  for (const auto& s : series)
    out << s.m << "," << format_double(s.bound) << "," << format_double(s.observed) << ","
        << format_double(s.slack) << "\n";
}

void write_table_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  out << "# format_version: " << kFormatVersion << "\n";
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_double(row[k]);
    out << "\n";
  }
}

HistoryState read_window_csv(std::istream& in, std::size_t n_channels, Step window_start) {
  std::map<Step, std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'm') continue;
    std::istringstream fields(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(fields, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("bad CSV cell '" + cell + "'");
      }
    }
    if (vals.size() != n_channels + 1)
      throw ConfigError("CSV row has " + std::to_string(vals.size()) + " columns, expected " +
                        std::to_string(n_channels + 1));
    rows[static_cast<Step>(vals[0])] = std::vector<double>(vals.begin() + 1, vals.end());
  }
  HistoryState state(n_channels, window_start);
  for (Step j = window_start; j <= 0; ++j) {
    const auto it = rows.find(j);
    if (it == rows.end()) throw ConfigError("CSV has no row for m = " + std::to_string(j));
    for (std::size_t i = 0; i < n_channels; ++i) state.set(i, j, it->second[i]);
  }
  return state;
}

}  // namespace delaystab
