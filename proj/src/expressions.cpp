#include "covbell/expressions.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "covbell/errors.hpp"

namespace covbell {

namespace {

void check_dims(const BellExpression& expr, int nx, int ny) {
  if (expr.nX() != nx || expr.nY() != ny) {
    std::ostringstream os;
    os << "expression \"" << expr.name << "\" expects a " << expr.nX() << "x"
       << expr.nY() << " scenario, got " << nx << "x" << ny;
    throw input_error(os.str());
  }
}

}  // namespace

double evaluate(const BellExpression& expr, const Correlators& corr) {
  check_dims(expr, corr.nX(), corr.nY());
  double total = 0.0;
  for (int x = 0; x < expr.nX(); ++x) {
    for (int y = 0; y < expr.nY(); ++y) {
      const int s = expr.signs[x][y];
      if (s == 0) continue;
      double stat = 0.0;
      switch (expr.kind) {
        case CorrKind::raw:
          stat = corr.exy[x][y];
          break;
        case CorrKind::covariance:
          stat = covariance(corr, x, y);
          break;
        case CorrKind::pearson:
          stat = pearson(corr, x, y);
          break;
      }
      total += s * stat;
    }
  }
  for (int x = 0; x < expr.nX(); ++x) {
    if (expr.marginal_a[x] != 0) total += expr.marginal_a[x] * corr.ex[x];
  }
  for (int y = 0; y < expr.nY(); ++y) {
    if (expr.marginal_b[y] != 0) total += expr.marginal_b[y] * corr.ey[y];
  }
  return total;
}

std::optional<Rational> evaluate_exact(const BellExpression& expr,
                                       const ExactCorrelators& corr) {
  if (expr.kind == CorrKind::pearson) return std::nullopt;
  check_dims(expr, static_cast<int>(corr.ex.size()),
             static_cast<int>(corr.ey.size()));
  Rational total = 0;
  for (int x = 0; x < expr.nX(); ++x) {
    for (int y = 0; y < expr.nY(); ++y) {
      const int s = expr.signs[x][y];
      if (s == 0) continue;
      Rational stat = corr.exy[x][y];
      if (expr.kind == CorrKind::covariance) {
        stat -= corr.ex[x] * corr.ey[y];
      }
      total += s * stat;
    }
  }
  for (int x = 0; x < expr.nX(); ++x) {
    total += expr.marginal_a[x] * corr.ex[x];
  }
  for (int y = 0; y < expr.nY(); ++y) {
    total += expr.marginal_b[y] * corr.ey[y];
  }
  return total;
}

namespace {

BellExpression make(std::string name, CorrKind kind,
                    std::vector<std::vector<int>> signs,
                    std::vector<int> ma = {}, std::vector<int> mb = {}) {
  BellExpression e;
  e.name = std::move(name);
  e.kind = kind;
  e.signs = std::move(signs);
  e.marginal_a = ma.empty() ? std::vector<int>(e.signs.size(), 0) : std::move(ma);
  e.marginal_b =
      mb.empty() ? std::vector<int>(e.signs[0].size(), 0) : std::move(mb);
  return e;
}

const std::vector<std::vector<int>> kChshSigns = {{1, 1}, {1, -1}};
const std::vector<std::vector<int>> kChshPrimeSigns = {{1, -1}, {-1, -1}};
const std::vector<std::vector<int>> k3322Signs = {{1, 1, 1}, {1, 1, -1},
                                                  {1, -1, 0}};

}  // namespace

BellExpression chsh_expression() {
  return make("chsh", CorrKind::raw, kChshSigns);
}

BellExpression covchsh_expression() {
  return make("covchsh", CorrKind::covariance, kChshSigns);
}

BellExpression covchsh_prime_expression() {
  return make("covchsh_prime", CorrKind::covariance, kChshPrimeSigns);
}

BellExpression i3322_expression() {
  return make("i3322", CorrKind::raw, k3322Signs, {1, 1, 0}, {-1, -1, 0});
}

BellExpression cov3322_expression() {
  return make("cov3322", CorrKind::covariance, k3322Signs);
}

BellExpression rchsh_expression() {
  return make("rchsh", CorrKind::pearson, kChshSigns);
}

const std::vector<std::string>& expression_names() {
  static const std::vector<std::string> names = {
      "chsh", "covchsh", "covchsh_prime", "i3322", "cov3322", "rchsh"};
  return names;
}

BellExpression expression_by_name(const std::string& name) {
  if (name == "chsh") return chsh_expression();
  if (name == "covchsh") return covchsh_expression();
  if (name == "covchsh_prime") return covchsh_prime_expression();
  if (name == "i3322") return i3322_expression();
  if (name == "cov3322") return cov3322_expression();
  if (name == "rchsh") return rchsh_expression();
  throw input_error("unknown expression \"" + name +
                    "\" (try chsh, covchsh, covchsh_prime, i3322, cov3322, "
                    "rchsh, or a JSON file)");
}

std::optional<double> known_local_bound(const std::string& name) {
  if (name == "chsh") return 2.0;
  if (name == "covchsh") return 16.0 / 7.0;
  if (name == "i3322") return 4.0;
  if (name == "cov3322") return 4.5;
  if (name == "rchsh") return 2.5;
  return std::nullopt;
}

BellExpression expression_from_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("signs")) {
    throw input_error("custom expression needs a \"signs\" matrix");
  }
  BellExpression e;
  e.name = doc.value("name", std::string("custom"));
  const std::string kind = doc.value("kind", std::string("covariance"));
  if (kind == "raw") {
    e.kind = CorrKind::raw;
  } else if (kind == "covariance") {
    e.kind = CorrKind::covariance;
  } else if (kind == "pearson") {
    e.kind = CorrKind::pearson;
  } else {
    throw input_error("expression kind must be raw, covariance, or pearson");
  }
  for (const auto& row : doc["signs"]) {
    std::vector<int> r;
    for (const auto& v : row) {
      const int s = v.get<int>();
      if (s < -1 || s > 1) {
        throw input_error("sign matrix entries must be -1, 0, or +1");
      }
      r.push_back(s);
    }
    e.signs.push_back(std::move(r));
  }
  if (e.signs.empty() || e.signs[0].empty()) {
    throw input_error("sign matrix must be nonempty");
  }
  for (const auto& row : e.signs) {
    if (row.size() != e.signs[0].size()) {
      throw input_error("sign matrix rows must have equal length");
    }
  }
  e.marginal_a.assign(e.nX(), 0);
  e.marginal_b.assign(e.nY(), 0);
  if (doc.contains("marginalA")) {
    const auto& ma = doc["marginalA"];
    if (static_cast<int>(ma.size()) != e.nX()) {
      throw input_error("marginalA length must equal the number of rows");
    }
    for (int i = 0; i < e.nX(); ++i) e.marginal_a[i] = ma[i].get<int>();
  }
  if (doc.contains("marginalB")) {
    const auto& mb = doc["marginalB"];
    if (static_cast<int>(mb.size()) != e.nY()) {
      throw input_error("marginalB length must equal the number of columns");
    }
    for (int i = 0; i < e.nY(); ++i) e.marginal_b[i] = mb[i].get<int>();
  }
  return e;
}

BellExpression expression_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open expression file: " + path);
  return expression_from_json(in);
}

double chsh(const Correlators& corr) {
  return evaluate(chsh_expression(), corr);
}
double covchsh(const Correlators& corr) {
  return evaluate(covchsh_expression(), corr);
}
double covchsh_prime(const Correlators& corr) {
  return evaluate(covchsh_prime_expression(), corr);
}
double i3322(const Correlators& corr) {
  return evaluate(i3322_expression(), corr);
}
double cov3322(const Correlators& corr) {
  return evaluate(cov3322_expression(), corr);
}
double rchsh(const Correlators& corr) {
  return evaluate(rchsh_expression(), corr);
}

}  // namespace covbell
