#include "delaystab/seeds.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "delaystab/errors.hpp"
#include "delaystab/report.hpp"

namespace delaystab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= s.size(); ++k) {
    if (k == s.size() || s[k] == sep) {
      out.push_back(trim(s.substr(start, k - start)));
      start = k + 1;
    }
  }
  return out;
}

double number(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("bad number '" + std::string(s) + "' in seed");
  return v;
}

std::vector<double> channel_samples(std::string_view term, Step r) {
  const std::size_t len = static_cast<std::size_t>(-r) + 1;
  std::vector<double> out(len);
  if (term.starts_with("table(") && term.ends_with(")")) {
    const auto vals = split(term.substr(6, term.size() - 7), ';');
    if (vals.size() != len)
      throw ConfigError("table seed needs " + std::to_string(len) + " values for j = " +
                        std::to_string(r) + "..0");
    for (std::size_t k = 0; k < len; ++k) out[k] = number(vals[k]);
    return out;
  }
  double scale = 1.0;
  std::string_view fn = term;
  if (const auto star = term.find('*'); star != std::string_view::npos) {
    scale = number(trim(term.substr(0, star)));
    fn = trim(term.substr(star + 1));
  } else if (term.starts_with("-") && !term.starts_with("-0") &&
             (term.ends_with("cos") || term.ends_with("sin") || term.ends_with("exp"))) {
    scale = -1.0;
    fn = term.substr(1);
  }
  double (*f)(double) = nullptr;
  if (fn == "cos") f = [](double j) { return std::cos(j); };
  else if (fn == "sin") f = [](double j) { return std::sin(j); };
  else if (fn == "exp") f = [](double j) { return std::exp(j); };
  if (f) {
    for (std::size_t k = 0; k < len; ++k) out[k] = scale * f(static_cast<double>(r + static_cast<Step>(k)));
    return out;
  }
  const double v = number(term);
  for (auto& x : out) x = v;
  return out;
}

}  // namespace

HistoryState parse_seed(std::string_view text, std::size_t n_channels, Step window_start) {
  text = trim(text);
  if (text.starts_with("@")) {
    const std::string path(text.substr(1));
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read seed file '" + path + "'");
    return read_window_csv(in, n_channels, window_start);
  }
  const auto terms = split(text, ',');
  if (terms.size() != n_channels)
    throw ConfigError("seed '" + std::string(text) + "' has " + std::to_string(terms.size()) +
                      " channel terms, expected " + std::to_string(n_channels));
  std::vector<std::vector<double>> channels;
  for (const auto& t : terms) channels.push_back(channel_samples(t, window_start));
  return HistoryState::from_channels(channels, window_start);
}

StatePair parse_seed_pair(std::string_view text, std::size_t n_channels, Step window_start) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ConfigError("seed pair must look like 'seedA:seedB'");
  return {parse_seed(parts[0], n_channels, window_start),
          parse_seed(parts[1], n_channels, window_start)};
}

std::vector<HistoryState> default_seeds(std::size_t n_channels, Step window_start) {
  static const char* const kTerms[3][2] = {
      {"cos", "sin"}, {"exp", "-1"}, {"-1.5*exp", "1.5*cos"}};
  std::vector<HistoryState> out;
  for (const auto& row : kTerms) {
    std::string text;
    for (std::size_t i = 0; i < n_channels; ++i) {
      if (i) text += ",";
      text += row[i % 2];
    }
    out.push_back(parse_seed(text, n_channels, window_start));
  }
  return out;
}

std::vector<StatePair> default_seed_pairs(std::size_t n_channels, Step window_start) {
  const auto s = default_seeds(n_channels, window_start);
  return {{s[0], s[1]}, {s[0], s[2]}, {s[1], s[2]}};
}

}  // namespace delaystab
