#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "covbell/rational.hpp"

namespace covbell {

// Conditional bipartite distribution P(a,b|x,y) over finite outcome alphabets.
// Validation tolerances (pinned):
//   - entries >= -1e-12, per-context sums within 1e-12 of 1
//   - non-signalling vs. the y=0 (x=0) reference marginal: hard error above
//     1e-9, stderr warning between 1e-12 and 1e-9
//   - outcome values within [-1, 1]
// Instances are immutable after construction; all accessors are const.
class JointDistribution {
 public:
  static constexpr double kNormTol = 1e-12;
  static constexpr double kSignalWarnTol = 1e-12;
  static constexpr double kSignalHardTol = 1e-9;

  // table[x][y][a][b] = P(a,b|x,y). Throws input_error for malformed data
  // (shape, negative or unnormalized probabilities, outcomes out of range)
  // and invariant_error for signalling beyond the hard tolerance.
  JointDistribution(std::vector<std::vector<double>> outcomes_a,
                    std::vector<std::vector<double>> outcomes_b,
                    std::vector<std::vector<std::vector<std::vector<double>>>>
                        table);

  int nX() const { return static_cast<int>(outcomes_a_.size()); }
  int nY() const { return static_cast<int>(outcomes_b_.size()); }
  const std::vector<double>& outcomesA(int x) const { return outcomes_a_[x]; }
  const std::vector<double>& outcomesB(int y) const { return outcomes_b_[y]; }
  double p(int x, int y, int a, int b) const { return table_[x][y][a][b]; }
  const std::vector<std::vector<std::vector<std::vector<double>>>>& table()
      const {
    return table_;
  }

 private:
  std::vector<std::vector<double>> outcomes_a_;
  std::vector<std::vector<double>> outcomes_b_;
  std::vector<std::vector<std::vector<std::vector<double>>>> table_;
};

// First and second moments per input pair. Marginals are computed against the
// y=0 (resp. x=0) context; non-signalling makes that choice irrelevant.
struct Correlators {
  std::vector<std::vector<double>> exy;  // <Ax By>
  std::vector<double> ex;                // <Ax>
  std::vector<double> ey;                // <By>
  std::vector<double> ex2;               // <Ax^2>
  std::vector<double> ey2;               // <By^2>

  int nX() const { return static_cast<int>(ex.size()); }
  int nY() const { return static_cast<int>(ey.size()); }
};

Correlators correlators(const JointDistribution& dist);

// <Ax By> - <Ax><By>
double covariance(const Correlators& corr, int x, int y);

// cov / (sigma_A sigma_B); 0 by convention when either sigma < 1e-10.
double pearson(const Correlators& corr, int x, int y);
inline constexpr double kSigmaZeroTol = 1e-10;

double sigma_a(const Correlators& corr, int x);
double sigma_b(const Correlators& corr, int y);

// Binary +-1 coarse-graining P'(a',b'|x,y) = sum_ab (1+a'a)(1+b'b)/4 P(a,b|x,y).
// Preserves all first moments, hence all covariances.
JointDistribution binarize(const JointDistribution& dist);

// ---------------------------------------------------------------- exact twin
// When a JSON file carries exclusively exact probabilities ("p/q" strings,
// decimal strings, integers), the loader also exposes this exact mirror so
// covariance-type expressions can be evaluated in rational arithmetic.
struct ExactDistribution {
  std::vector<std::vector<Rational>> outcomes_a;
  std::vector<std::vector<Rational>> outcomes_b;
  std::vector<std::vector<std::vector<std::vector<Rational>>>> table;
};

struct ExactCorrelators {
  std::vector<std::vector<Rational>> exy;
  std::vector<Rational> ex;
  std::vector<Rational> ey;
};

ExactCorrelators exact_correlators(const ExactDistribution& dist);

struct LoadedDistribution {
  JointDistribution dist;
  std::optional<ExactDistribution> exact;  // present iff every entry was exact
};

// JSON schema:
//   { "nX":2, "nY":2, "outcomesA":[[1,-1],[1,-1]], "outcomesB":[[1,-1],[1,-1]],
//     "table": { "x,y": [[p,...],...], ... } }
// Probabilities may be numbers, decimal strings, or "p/q" strings.
LoadedDistribution load_distribution_json(std::istream& in);
LoadedDistribution load_distribution_file(const std::string& path);

}  // namespace covbell
