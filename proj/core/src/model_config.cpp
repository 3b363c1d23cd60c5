#include "delaystab/model_config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "delaystab/errors.hpp"

namespace delaystab {

namespace {

using json = nlohmann::json;
using PathItem = std::variant<std::string, std::size_t>;
using Path = std::vector<PathItem>;

/// Semantic error at a JSON location, translated to a byte offset at the top.
struct FieldError {
  Path path;
  std::string message;
};

// ---------------------------------------------------------------------------
// Byte-offset locator: walks the raw text to the value at `path`.

class Locator {
 public:
  explicit Locator(std::string_view text) : t_(text) {}

  std::size_t find(const Path& path) {
    pos_ = 0;
    ws();
    for (const auto& item : path) {
      const std::size_t here = pos_;
      if (!step(item)) return here;
    }
    return pos_;
  }

 private:
  void ws() {
    while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
  }

  std::string string_token() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < t_.size() && t_[pos_] != '"') {
      if (t_[pos_] == '\\') ++pos_;
      if (pos_ < t_.size()) out += t_[pos_++];
    }
    ++pos_;
    return out;
  }

  void skip_value() {
    ws();
    if (pos_ >= t_.size()) return;
    const char c = t_[pos_];
    if (c == '"') {
      string_token();
    } else if (c == '{' || c == '[') {
      int depth = 0;
      while (pos_ < t_.size()) {
        const char d = t_[pos_];
        if (d == '"') {
          string_token();
          continue;
        }
        if (d == '{' || d == '[') ++depth;
        if (d == '}' || d == ']') --depth;
        ++pos_;
        if (depth == 0) break;
      }
    } else {
      while (pos_ < t_.size() && t_[pos_] != ',' && t_[pos_] != '}' && t_[pos_] != ']') ++pos_;
    }
    ws();
  }

  // Moves pos_ to the child value named by `item`; false when not found.
  bool step(const PathItem& item) {
    ws();
    if (pos_ >= t_.size()) return false;
    if (const auto* key = std::get_if<std::string>(&item)) {
      if (t_[pos_] != '{') return false;
      ++pos_;
      while (true) {
        ws();
        if (pos_ >= t_.size() || t_[pos_] != '"') return false;
        const std::string k = string_token();
        ws();
        if (pos_ < t_.size() && t_[pos_] == ':') ++pos_;
        ws();
        if (k == *key) return true;
        skip_value();
        if (pos_ < t_.size() && t_[pos_] == ',') ++pos_;
        else return false;
      }
    }
    const std::size_t index = std::get<std::size_t>(item);
    if (t_[pos_] != '[') return false;
    ++pos_;
    for (std::size_t k = 0;; ++k) {
      ws();
      if (k == index) return pos_ < t_.size() && t_[pos_] != ']';
      skip_value();
      if (pos_ < t_.size() && t_[pos_] == ',') ++pos_;
      else return false;
    }
  }

  std::string_view t_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------

class Reader {
 public:
  explicit Reader(const json& root) : root_(root) {}

  const json& root() const { return root_; }

  [[noreturn]] void fail(Path path, std::string message) const {
    throw FieldError{std::move(path), std::move(message)};
  }

  static Path child(Path p, PathItem item) {
    p.push_back(std::move(item));
    return p;
  }

  const json& at(const json& obj, const Path& path, const std::string& key) const {
    if (!obj.is_object() || !obj.contains(key)) fail(path, "missing field '" + key + "'");
    return obj.at(key);
  }

  std::size_t count(const json& obj, const Path& path, const std::string& key) const {
    const json& v = at(obj, path, key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
      fail(child(path, key), "'" + key + "' must be a positive integer");
    return v.get<std::size_t>();
  }

  Step nonneg(const json& v, const Path& path, const std::string& what) const {
    if (!v.is_number_integer() || v.get<long long>() < 0)
      fail(path, what + " must be a nonnegative integer");
    return v.get<Step>();
  }

  Rational rational(const json& v, const Path& path) const {
    try {
      if (v.is_number_integer()) return Rational(v.get<long long>());
      if (v.is_number()) return rational_from_double(v.get<double>());
      if (v.is_string()) return parse_rational(v.get<std::string>());
    } catch (const SpecError& e) {
      fail(path, e.what());
    }
    fail(path, "expected a number or a \"p/q\" string");
  }

  std::optional<Step> omega() const {
    if (!root_.contains("omega")) return std::nullopt;
    return nonneg(root_.at("omega"), {std::string("omega")}, "'omega'");
  }

  Coefficient coefficient(const json& v, const Path& path) const {
    if (!v.is_object()) return Coefficient::constant(rational(v, path));
    const std::string kind = string_field(v, path, "kind");
    if (kind == "const") return Coefficient::constant(rational(at(v, path, "value"), child(path, "value")));
    if (kind == "table") {
      const json& vals = at(v, path, "values");
      const Path vp = child(path, "values");
      if (!vals.is_array() || vals.empty()) fail(vp, "'values' must be a nonempty array");
      std::vector<Rational> out;
      for (std::size_t k = 0; k < vals.size(); ++k) out.push_back(rational(vals[k], child(vp, k)));
      return Coefficient::table(std::move(out));
    }
    if (kind == "cos" || kind == "sin") {
      const Rational a = rational(at(v, path, "amplitude"), child(path, "amplitude"));
      std::optional<Step> period;
      if (v.contains("period")) period = nonneg(v.at("period"), child(path, "period"), "'period'");
      else period = omega();
      if (!period || *period < 1) fail(path, "trig coefficient needs a positive 'period' or top-level 'omega'");
      return kind == "cos" ? Coefficient::cosine(a, *period) : Coefficient::sine(a, *period);
    }
    if (kind == "alt") {
      return Coefficient::alternating(rational(at(v, path, "base"), child(path, "base")),
                                      rational(at(v, path, "amplitude"), child(path, "amplitude")));
    }
    fail(child(path, "kind"), "unknown coefficient kind '" + kind + "'");
  }

  Delay delay(const json& v, const Path& path) const {
    if (!v.is_object()) return Delay::constant(nonneg(v, path, "delay"));
    const std::string kind = string_field(v, path, "kind");
    if (kind == "const") return Delay::constant(nonneg(at(v, path, "value"), child(path, "value"), "delay"));
    if (kind == "table") {
      const json& vals = at(v, path, "values");
      const Path vp = child(path, "values");
      if (!vals.is_array() || vals.empty()) fail(vp, "'values' must be a nonempty array");
      std::vector<Step> out;
      for (std::size_t k = 0; k < vals.size(); ++k) out.push_back(nonneg(vals[k], child(vp, k), "delay"));
      return Delay::table(std::move(out));
    }
    if (kind == "alt") {
      const json& a = at(v, path, "amplitude");
      if (!a.is_number_integer()) fail(child(path, "amplitude"), "delay amplitude must be an integer");
      try {
        return Delay::alternating(nonneg(at(v, path, "base"), child(path, "base"), "delay base"),
                                  a.get<Step>());
      } catch (const SpecError& e) {
        fail(path, e.what());
      }
    }
    fail(child(path, "kind"), "unknown delay kind '" + kind + "'");
  }

  Activation activation(const json& v, const Path& path) const {
    std::string name;
    if (v.is_string()) {
      name = v.get<std::string>();
    } else if (v.is_object()) {
      name = string_field(v, path, "name");
    } else {
      fail(path, "activation must be a name or an object");
    }
    Activation act;
    if (name == "tanh") act = Activation::tanh();
    else if (name == "arctan" || name == "atan") act = Activation::arctan();
    else if (name == "satlin") act = Activation::satlin();
    else if (name == "identity" || name == "linear") act = Activation::identity();
    else if (name == "table") {
      const json& knots = at(v, path, "knots");
      const Path kp = child(path, "knots");
      if (!knots.is_array()) fail(kp, "'knots' must be an array of [x, y] pairs");
      std::vector<double> xs, ys;
      for (std::size_t k = 0; k < knots.size(); ++k) {
        const json& p = knots[k];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
          fail(child(kp, k), "knot must be [x, y]");
        xs.push_back(p[0].get<double>());
        ys.push_back(p[1].get<double>());
      }
      try {
        act = Activation::table(std::move(xs), std::move(ys));
      } catch (const SpecError& e) {
        fail(kp, e.what());
      }
    } else {
      fail(v.is_object() ? child(path, "name") : path, "unknown activation '" + name + "'");
    }
    if (v.is_object() && v.contains("lipschitz")) {
      const Rational L = rational(v.at("lipschitz"), child(path, "lipschitz"));
      if (L < 0) fail(child(path, "lipschitz"), "Lipschitz constant must be nonnegative");
      act = act.with_lipschitz(L);
    }
    return act;
  }

  template <class T, class F>
  std::vector<T> list(const json& obj, const Path& path, const std::string& key, std::size_t n,
                      F&& item, std::optional<T> fallback) const {
    if (!obj.contains(key)) {
      if (!fallback) fail(path, "missing field '" + key + "'");
      return std::vector<T>(n, *fallback);
    }
    const json& arr = obj.at(key);
    const Path p = child(path, key);
    if (!arr.is_array() || arr.size() != n)
      fail(p, "'" + key + "' must be an array of " + std::to_string(n) + " entries");
    std::vector<T> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(item(arr[i], child(p, i)));
    return out;
  }

  /// Flattens a nested [d0][d1]... array in row-major order.
  template <class T, class F>
  std::vector<T> nested(const json& obj, const Path& path, const std::string& key,
                        const std::vector<std::size_t>& dims, F&& item,
                        std::optional<T> fallback) const {
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    if (!obj.contains(key)) {
      if (!fallback) fail(path, "missing field '" + key + "'");
      return std::vector<T>(total, *fallback);
    }
    std::vector<T> out;
    out.reserve(total);
    walk(obj.at(key), child(path, key), key, dims, 0, item, out);
    return out;
  }

 private:
  std::string string_field(const json& obj, const Path& path, const std::string& key) const {
    const json& v = at(obj, path, key);
    if (!v.is_string()) fail(child(path, key), "'" + key + "' must be a string");
    return v.get<std::string>();
  }

  template <class T, class F>
  void walk(const json& v, const Path& path, const std::string& key,
            const std::vector<std::size_t>& dims, std::size_t level, F& item,
            std::vector<T>& out) const {
    if (level == dims.size()) {
      out.push_back(item(v, path));
      return;
    }
    if (!v.is_array() || v.size() != dims[level]) {
      std::string shape;
      for (auto d : dims) shape += "[" + std::to_string(d) + "]";
      fail(path, "'" + key + "' must have shape " + shape);
    }
    for (std::size_t k = 0; k < v.size(); ++k) walk(v[k], child(path, k), key, dims, level + 1, item, out);
  }

  const json& root_;
};

HopfieldSpec read_hopfield(const Reader& rd, Step tau) {
  const json& root = rd.root();
  HopfieldSpec s;
  s.n = rd.count(root, {}, "n");
  s.k = root.contains("k") ? rd.count(root, {}, "k") : 1;
  s.tau = tau;
  auto coef = [&](const json& v, const Path& p) { return rd.coefficient(v, p); };
  auto del = [&](const json& v, const Path& p) { return rd.delay(v, p); };
  auto act = [&](const json& v, const Path& p) { return rd.activation(v, p); };
  const std::vector<std::size_t> cube{s.n, s.n, s.k};
  s.leakage = rd.list<Coefficient>(root, {}, "leakage", s.n, coef, std::nullopt);
  s.weights = rd.nested<Coefficient>(root, {}, "weights", cube, coef, Coefficient{});
  s.delays = rd.nested<Delay>(root, {}, "delays", cube, del, Delay{});
  s.activations = rd.nested<Activation>(root, {}, "activations", cube, act, Activation::tanh());
  s.inputs = rd.list<Coefficient>(root, {}, "inputs", s.n, coef, Coefficient{});
  return s;
}

BAMSpec read_bam(const Reader& rd, Step tau) {
  const json& root = rd.root();
  const std::size_t n1 = rd.count(root, {}, "n1");
  const std::size_t n2 = rd.count(root, {}, "n2");
  BAMSpec s = BAMSpec::zeros(n1, n2, tau);
  auto coef = [&](const json& v, const Path& p) { return rd.coefficient(v, p); };
  auto del = [&](const json& v, const Path& p) { return rd.delay(v, p); };
  auto act = [&](const json& v, const Path& p) { return rd.activation(v, p); };
  const std::vector<std::size_t> xy{n1, n2}, yx{n2, n1};
  s.c_hat = rd.list<Coefficient>(root, {}, "c_hat", n1, coef, std::nullopt);
  s.c_tilde = rd.list<Coefficient>(root, {}, "c_tilde", n2, coef, std::nullopt);
  s.a_hat = rd.nested<Coefficient>(root, {}, "a_hat", xy, coef, Coefficient{});
  s.b_hat = rd.nested<Coefficient>(root, {}, "b_hat", xy, coef, Coefficient{});
  s.tau_hat = rd.nested<Delay>(root, {}, "tau_hat", xy, del, Delay{});
  s.I_hat = rd.list<Coefficient>(root, {}, "I_hat", n1, coef, Coefficient{});
  s.a_tilde = rd.nested<Coefficient>(root, {}, "a_tilde", yx, coef, Coefficient{});
  s.b_tilde = rd.nested<Coefficient>(root, {}, "b_tilde", yx, coef, Coefficient{});
  s.tau_tilde = rd.nested<Delay>(root, {}, "tau_tilde", yx, del, Delay{});
  s.I_tilde = rd.list<Coefficient>(root, {}, "I_tilde", n2, coef, Coefficient{});
  s.f = rd.list<Activation>(root, {}, "f", n2, act, Activation::tanh());
  s.g = rd.list<Activation>(root, {}, "g", n1, act, Activation::tanh());
  return s;
}

HighOrderSpec read_high_order(const Reader& rd, Step tau) {
  const json& root = rd.root();
  const std::size_t n = rd.count(root, {}, "n");
  HighOrderSpec s = HighOrderSpec::zeros(n, tau);
  auto coef = [&](const json& v, const Path& p) { return rd.coefficient(v, p); };
  auto del = [&](const json& v, const Path& p) { return rd.delay(v, p); };
  auto act = [&](const json& v, const Path& p) { return rd.activation(v, p); };
  auto rat = [&](const json& v, const Path& p) { return rd.rational(v, p); };
  const std::vector<std::size_t> sq{n, n}, cube{n, n, n};
  s.c = rd.list<Coefficient>(root, {}, "c", n, coef, std::nullopt);
  s.a = rd.nested<Coefficient>(root, {}, "a", sq, coef, Coefficient{});
  s.b = rd.nested<Coefficient>(root, {}, "b", cube, coef, Coefficient{});
  s.tau_d = rd.nested<Delay>(root, {}, "tau_delays", cube, del, Delay{});
  s.xi = rd.nested<Delay>(root, {}, "xi_delays", cube, del, Delay{});
  s.f = rd.list<Activation>(root, {}, "f", n, act, Activation::tanh());
  s.g = rd.list<Activation>(root, {}, "g", n, act, Activation::tanh());
  s.g_bound = rd.list<Rational>(root, {}, "g_bound", n, rat, std::nullopt);
  return s;
}

ModelSpec read_model(const Reader& rd) {
  const json& root = rd.root();
  if (!root.is_object()) rd.fail({}, "model config must be a JSON object");
  const json& version = rd.at(root, {}, "format_version");
  if (!version.is_number_integer() || version.get<long long>() != 1)
    rd.fail({std::string("format_version")}, "unsupported format_version (expected 1)");
  const json& model = rd.at(root, {}, "model");
  if (!model.is_string()) rd.fail({std::string("model")}, "'model' must be a string");
  const Step tau = rd.nonneg(rd.at(root, {}, "tau"), {std::string("tau")}, "'tau'");
  rd.omega();

  const std::string kind = model.get<std::string>();
  ModelSpec spec;
  if (kind == "hopfield") spec = read_hopfield(rd, tau);
  else if (kind == "bam") spec = read_bam(rd, tau);
  else if (kind == "high_order") spec = read_high_order(rd, tau);
  else rd.fail({std::string("model")}, "unknown model '" + kind + "'");

  try {
    std::visit([](const auto& s) { s.validate(); }, spec);
  } catch (const SpecError& e) {
    rd.fail({std::string("model")}, e.what());
  }
  return spec;
}

}  // namespace

ModelSpec parse_model_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    throw ParseError(std::string("invalid JSON: ") + e.what(), offset);
  }
  try {
    return read_model(Reader(root));
  } catch (const FieldError& e) {
    throw ParseError(e.message, Locator(text).find(e.path));
  }
}

ModelSpec load_model_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_config(buf.str());
}

}  // namespace delaystab
