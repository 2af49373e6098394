#include "covbell/correlations.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "covbell/errors.hpp"

namespace covbell {

namespace {

std::string cell_where(int x, int y, int a = -1, int b = -1) {
  std::ostringstream os;
  os << "context (x=" << x << ",y=" << y << ")";
  if (a >= 0) os << " cell (a=" << a << ",b=" << b << ")";
  return os.str();
}

}  // namespace

JointDistribution::JointDistribution(
    std::vector<std::vector<double>> outcomes_a,
    std::vector<std::vector<double>> outcomes_b,
    std::vector<std::vector<std::vector<std::vector<double>>>> table)
    : outcomes_a_(std::move(outcomes_a)),
      outcomes_b_(std::move(outcomes_b)),
      table_(std::move(table)) {
  const int nx = nX();
  const int ny = nY();
  if (nx < 1 || ny < 1) {
    throw input_error("distribution needs at least one input per side");
  }
  for (int x = 0; x < nx; ++x) {
    if (outcomes_a_[x].empty()) {
      throw input_error("empty outcome alphabet for Alice input " +
                        std::to_string(x));
    }
    for (double v : outcomes_a_[x]) {
      if (!(std::abs(v) <= 1.0)) {
        throw input_error("Alice outcome value out of [-1,1] at input " +
                          std::to_string(x));
      }
    }
  }
  for (int y = 0; y < ny; ++y) {
    if (outcomes_b_[y].empty()) {
      throw input_error("empty outcome alphabet for Bob input " +
                        std::to_string(y));
    }
    for (double v : outcomes_b_[y]) {
      if (!(std::abs(v) <= 1.0)) {
        throw input_error("Bob outcome value out of [-1,1] at input " +
                          std::to_string(y));
      }
    }
  }
  if (static_cast<int>(table_.size()) != nx) {
    throw input_error("table has wrong number of Alice contexts");
  }
  for (int x = 0; x < nx; ++x) {
    if (static_cast<int>(table_[x].size()) != ny) {
      throw input_error("table has wrong number of Bob contexts for x=" +
                        std::to_string(x));
    }
    for (int y = 0; y < ny; ++y) {
      const auto& block = table_[x][y];
      if (block.size() != outcomes_a_[x].size()) {
        throw input_error("table row count mismatch in " + cell_where(x, y));
      }
      double sum = 0.0;
      for (std::size_t a = 0; a < block.size(); ++a) {
        if (block[a].size() != outcomes_b_[y].size()) {
          throw input_error("table column count mismatch in " +
                            cell_where(x, y));
        }
        for (std::size_t b = 0; b < block[a].size(); ++b) {
          const double p = block[a][b];
          if (!(p >= -kNormTol) || !std::isfinite(p)) {
            throw input_error("negative probability in " +
                              cell_where(x, y, static_cast<int>(a),
                                         static_cast<int>(b)));
          }
          sum += p;
        }
      }
      if (std::abs(sum - 1.0) > kNormTol) {
        throw input_error("probabilities in " + cell_where(x, y) +
                          " sum to " + std::to_string(sum) + ", expected 1");
      }
    }
  }

  // Non-signalling: Alice's outcome distribution under x must not depend on y
  // (compared against the y=0 reference), and symmetrically for Bob.
  double worst = 0.0;
  for (int x = 0; x < nx; ++x) {
    const auto na = outcomes_a_[x].size();
    std::vector<double> ref(na, 0.0);
    for (std::size_t a = 0; a < na; ++a) {
      for (double p : table_[x][0][a]) ref[a] += p;
    }
    for (int y = 1; y < ny; ++y) {
      for (std::size_t a = 0; a < na; ++a) {
        double m = 0.0;
        for (double p : table_[x][y][a]) m += p;
        worst = std::max(worst, std::abs(m - ref[a]));
      }
    }
  }
  for (int y = 0; y < ny; ++y) {
    const auto nb = outcomes_b_[y].size();
    std::vector<double> ref(nb, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t a = 0; a < outcomes_a_[0].size(); ++a) {
        ref[b] += table_[0][y][a][b];
      }
    }
    for (int x = 1; x < nx; ++x) {
      for (std::size_t b = 0; b < nb; ++b) {
        double m = 0.0;
        for (std::size_t a = 0; a < outcomes_a_[x].size(); ++a) {
          m += table_[x][y][a][b];
        }
        worst = std::max(worst, std::abs(m - ref[b]));
      }
    }
  }
  if (worst > kSignalHardTol) {
    std::ostringstream os;
    os << "signalling distribution: marginal deviation " << worst
       << " exceeds " << kSignalHardTol;
    throw invariant_error(os.str());
  }
  if (worst > kSignalWarnTol) {
    std::cerr << "warning: marginals deviate by " << worst
              << " (tolerated, below hard limit " << kSignalHardTol << ")\n";
  }
}

Correlators correlators(const JointDistribution& dist) {
  const int nx = dist.nX();
  const int ny = dist.nY();
  Correlators c;
  c.exy.assign(nx, std::vector<double>(ny, 0.0));
  c.ex.assign(nx, 0.0);
  c.ey.assign(ny, 0.0);
  c.ex2.assign(nx, 0.0);
  c.ey2.assign(ny, 0.0);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      double m = 0.0;
      for (std::size_t a = 0; a < dist.outcomesA(x).size(); ++a) {
        for (std::size_t b = 0; b < dist.outcomesB(y).size(); ++b) {
          m += dist.p(x, y, static_cast<int>(a), static_cast<int>(b)) *
               dist.outcomesA(x)[a] * dist.outcomesB(y)[b];
        }
      }
      c.exy[x][y] = m;
    }
  }
  // Marginal moments from the reference contexts (y=0 for A, x=0 for B).
  for (int x = 0; x < nx; ++x) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t a = 0; a < dist.outcomesA(x).size(); ++a) {
      double pa = 0.0;
      for (std::size_t b = 0; b < dist.outcomesB(0).size(); ++b) {
        pa += dist.p(x, 0, static_cast<int>(a), static_cast<int>(b));
      }
      const double v = dist.outcomesA(x)[a];
      m1 += pa * v;
      m2 += pa * v * v;
    }
    c.ex[x] = m1;
    c.ex2[x] = m2;
  }
  for (int y = 0; y < ny; ++y) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t b = 0; b < dist.outcomesB(y).size(); ++b) {
      double pb = 0.0;
      for (std::size_t a = 0; a < dist.outcomesA(0).size(); ++a) {
        pb += dist.p(0, y, static_cast<int>(a), static_cast<int>(b));
      }
      const double v = dist.outcomesB(y)[b];
      m1 += pb * v;
      m2 += pb * v * v;
    }
    c.ey[y] = m1;
    c.ey2[y] = m2;
  }
  return c;
}

double covariance(const Correlators& corr, int x, int y) {
  return corr.exy[x][y] - corr.ex[x] * corr.ey[y];
}

double sigma_a(const Correlators& corr, int x) {
  return std::sqrt(std::max(0.0, corr.ex2[x] - corr.ex[x] * corr.ex[x]));
}

double sigma_b(const Correlators& corr, int y) {
  return std::sqrt(std::max(0.0, corr.ey2[y] - corr.ey[y] * corr.ey[y]));
}

double pearson(const Correlators& corr, int x, int y) {
  const double sa = sigma_a(corr, x);
  const double sb = sigma_b(corr, y);
  if (sa < kSigmaZeroTol || sb < kSigmaZeroTol) return 0.0;
  return covariance(corr, x, y) / (sa * sb);
}

JointDistribution binarize(const JointDistribution& dist) {
  const int nx = dist.nX();
  const int ny = dist.nY();
  std::vector<std::vector<double>> oa(nx, {1.0, -1.0});
  std::vector<std::vector<double>> ob(ny, {1.0, -1.0});
  std::vector<std::vector<std::vector<std::vector<double>>>> table(
      nx, std::vector<std::vector<std::vector<double>>>(
              ny, std::vector<std::vector<double>>(2,
                                                   std::vector<double>(2, 0))));
  const double pm[2] = {1.0, -1.0};
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      for (std::size_t a = 0; a < dist.outcomesA(x).size(); ++a) {
        for (std::size_t b = 0; b < dist.outcomesB(y).size(); ++b) {
          const double p = dist.p(x, y, static_cast<int>(a),
                                  static_cast<int>(b));
          if (p == 0.0) continue;
          const double va = dist.outcomesA(x)[a];
          const double vb = dist.outcomesB(y)[b];
          for (int ap = 0; ap < 2; ++ap) {
            for (int bp = 0; bp < 2; ++bp) {
              table[x][y][ap][bp] += p * (1.0 + pm[ap] * va) / 2.0 *
                                     (1.0 + pm[bp] * vb) / 2.0;
            }
          }
        }
      }
    }
  }
  return JointDistribution(std::move(oa), std::move(ob), std::move(table));
}

ExactCorrelators exact_correlators(const ExactDistribution& dist) {
  const std::size_t nx = dist.outcomes_a.size();
  const std::size_t ny = dist.outcomes_b.size();
  ExactCorrelators c;
  c.exy.assign(nx, std::vector<Rational>(ny, Rational(0)));
  c.ex.assign(nx, Rational(0));
  c.ey.assign(ny, Rational(0));
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      Rational m = 0;
      for (std::size_t a = 0; a < dist.outcomes_a[x].size(); ++a) {
        for (std::size_t b = 0; b < dist.outcomes_b[y].size(); ++b) {
          m += dist.table[x][y][a][b] * dist.outcomes_a[x][a] *
               dist.outcomes_b[y][b];
        }
      }
      c.exy[x][y] = m;
    }
  }
  for (std::size_t x = 0; x < nx; ++x) {
    Rational m = 0;
    for (std::size_t a = 0; a < dist.outcomes_a[x].size(); ++a) {
      Rational pa = 0;
      for (std::size_t b = 0; b < dist.outcomes_b[0].size(); ++b) {
        pa += dist.table[x][0][a][b];
      }
      m += pa * dist.outcomes_a[x][a];
    }
    c.ex[x] = m;
  }
  for (std::size_t y = 0; y < ny; ++y) {
    Rational m = 0;
    for (std::size_t b = 0; b < dist.outcomes_b[y].size(); ++b) {
      Rational pb = 0;
      for (std::size_t a = 0; a < dist.outcomes_a[0].size(); ++a) {
        pb += dist.table[0][y][a][b];
      }
      m += pb * dist.outcomes_b[y][b];
    }
    c.ey[y] = m;
  }
  return c;
}

namespace {

using nlohmann::json;

// Parses a probability entry; sets `exact` to nullopt on the first entry that
// cannot be represented exactly (plain JSON floats stay approximate).
double parse_prob(const json& v, std::optional<Rational>* exact_out) {
  if (v.is_number_integer()) {
    const long long n = v.get<long long>();
    *exact_out = Rational(n);
    return static_cast<double>(n);
  }
  if (v.is_number_float()) {
    *exact_out = std::nullopt;
    return v.get<double>();
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    auto r = parse_rational(s);
    if (!r) throw input_error("unparseable probability string \"" + s + "\"");
    *exact_out = *r;
    return to_double(*r);
  }
  throw input_error("probability entries must be numbers or strings");
}

}  // namespace

LoadedDistribution load_distribution_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw input_error("distribution file must be a JSON object");
  for (const char* key : {"nX", "nY", "outcomesA", "outcomesB", "table"}) {
    if (!doc.contains(key)) {
      throw input_error(std::string("missing key \"") + key + "\"");
    }
  }
  const int nx = doc["nX"].get<int>();
  const int ny = doc["nY"].get<int>();
  if (nx < 1 || ny < 1 || nx > 16 || ny > 16) {
    throw input_error("nX/nY out of supported range");
  }

  bool all_exact = true;
  ExactDistribution exact;

  auto read_outcomes = [&](const json& arr, int n, const char* side) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != n) {
      throw input_error(std::string(side) + " outcome list length must match input count");
    }
    std::vector<std::vector<double>> out;
    std::vector<std::vector<Rational>> out_exact;
    for (const auto& inner : arr) {
      if (!inner.is_array() || inner.empty()) {
        throw input_error(std::string(side) + " outcome alphabets must be nonempty arrays");
      }
      std::vector<double> vals;
      std::vector<Rational> vals_exact;
      for (const auto& v : inner) {
        std::optional<Rational> r;
        vals.push_back(parse_prob(v, &r));
        if (r) {
          vals_exact.push_back(*r);
        } else {
          all_exact = false;
        }
      }
      out.push_back(std::move(vals));
      out_exact.push_back(std::move(vals_exact));
    }
    return std::pair(out, out_exact);
  };

  auto [oa, oa_exact] = read_outcomes(doc["outcomesA"], nx, "Alice");
  auto [ob, ob_exact] = read_outcomes(doc["outcomesB"], ny, "Bob");

  std::vector<std::vector<std::vector<std::vector<double>>>> table(
      nx, std::vector<std::vector<std::vector<double>>>(ny));
  exact.table.assign(
      nx, std::vector<std::vector<std::vector<Rational>>>(ny));
  const json& jt = doc["table"];
  if (!jt.is_object()) throw input_error("\"table\" must map \"x,y\" keys to matrices");
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      char key[16];
      std::snprintf(key, sizeof(key), "%d,%d", x, y);
      if (!jt.contains(key)) {
        throw input_error(std::string("table missing context \"") + key + "\"");
      }
      const json& block = jt[key];
      if (!block.is_array()) {
        throw input_error(std::string("table block \"") + key + "\" must be an array");
      }
      std::vector<std::vector<double>> rows;
      std::vector<std::vector<Rational>> rows_exact;
      for (const auto& jrow : block) {
        if (!jrow.is_array()) {
          throw input_error(std::string("table block \"") + key + "\" rows must be arrays");
        }
        std::vector<double> row;
        std::vector<Rational> row_exact;
        for (const auto& v : jrow) {
          std::optional<Rational> r;
          row.push_back(parse_prob(v, &r));
          if (r) {
            row_exact.push_back(*r);
          } else {
            all_exact = false;
          }
        }
        rows.push_back(std::move(row));
        rows_exact.push_back(std::move(row_exact));
      }
      table[x][y] = std::move(rows);
      exact.table[x][y] = std::move(rows_exact);
    }
  }

  LoadedDistribution out{
      JointDistribution(std::move(oa), std::move(ob), std::move(table)),
      std::nullopt};
  if (all_exact) {
    exact.outcomes_a = std::move(oa_exact);
    exact.outcomes_b = std::move(ob_exact);
    // Exact-side sanity: contexts must sum to exactly 1.
    for (const auto& per_x : exact.table) {
      for (const auto& block : per_x) {
        Rational sum = 0;
        for (const auto& row : block) {
          for (const auto& p : row) sum += p;
        }
        if (sum != 1) {
          all_exact = false;
          break;
        }
      }
    }
    if (all_exact) out.exact = std::move(exact);
  }
  return out;
}

LoadedDistribution load_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open distribution file: " + path);
  return load_distribution_json(in);
}

}  // namespace covbell
