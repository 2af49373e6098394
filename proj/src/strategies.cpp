#include "covbell/strategies.hpp"

#include <cmath>
#include <sstream>

#include "covbell/errors.hpp"

namespace covbell {

DeterministicStrategy strategy_from_index(int nx, int ny, int index) {
  if (nx < 1 || ny < 1 || index < 0 || index >= (1 << (nx + ny))) {
    throw input_error("strategy index out of range for scenario");
  }
  DeterministicStrategy s;
  s.index = index;
  s.a_out.resize(nx);
  s.b_out.resize(ny);
  for (int x = 0; x < nx; ++x) {
    s.a_out[x] = (index >> x) & 1 ? 1 : -1;
  }
  for (int y = 0; y < ny; ++y) {
    s.b_out[y] = (index >> (nx + y)) & 1 ? 1 : -1;
  }
  return s;
}

int strategy_index(const DeterministicStrategy& s) {
  int idx = 0;
  const int nx = static_cast<int>(s.a_out.size());
  for (int x = 0; x < nx; ++x) {
    if (s.a_out[x] > 0) idx |= 1 << x;
  }
  for (int y = 0; y < static_cast<int>(s.b_out.size()); ++y) {
    if (s.b_out[y] > 0) idx |= 1 << (nx + y);
  }
  return idx;
}

std::vector<DeterministicStrategy> enumerate_deterministic(int nx, int ny) {
  if (nx < 1 || ny < 1) {
    throw input_error("scenario needs at least one input per side");
  }
  std::vector<DeterministicStrategy> out;
  const int n = 1 << (nx + ny);
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(strategy_from_index(nx, ny, i));
  return out;
}

std::string strategy_notation(const DeterministicStrategy& s) {
  std::string t = "(";
  for (int v : s.a_out) t += v > 0 ? '+' : '-';
  t += '/';
  for (int v : s.b_out) t += v > 0 ? '+' : '-';
  t += ')';
  return t;
}

DeterministicStrategy strategy_from_notation(const std::string& text) {
  std::string body;
  for (char c : text) {
    if (c == '+' || c == '-' || c == '/') body.push_back(c);
  }
  const auto slash = body.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 >= body.size()) {
    throw input_error("strategy notation must look like (++/+-)");
  }
  DeterministicStrategy s;
  for (std::size_t i = 0; i < slash; ++i) {
    s.a_out.push_back(body[i] == '+' ? 1 : -1);
  }
  for (std::size_t i = slash + 1; i < body.size(); ++i) {
    s.b_out.push_back(body[i] == '+' ? 1 : -1);
  }
  s.index = strategy_index(s);
  return s;
}

JointDistribution strategy_distribution(const DeterministicStrategy& s) {
  const int nx = static_cast<int>(s.a_out.size());
  const int ny = static_cast<int>(s.b_out.size());
  std::vector<std::vector<double>> oa(nx, {1.0, -1.0});
  std::vector<std::vector<double>> ob(ny, {1.0, -1.0});
  std::vector<std::vector<std::vector<std::vector<double>>>> table(
      nx, std::vector<std::vector<std::vector<double>>>(
              ny, std::vector<std::vector<double>>(2,
                                                   std::vector<double>(2, 0))));
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      const int a = s.a_out[x] > 0 ? 0 : 1;
      const int b = s.b_out[y] > 0 ? 0 : 1;
      table[x][y][a][b] = 1.0;
    }
  }
  return JointDistribution(std::move(oa), std::move(ob), std::move(table));
}

void validate_decomposition(const LocalDecomposition& d) {
  if (static_cast<int>(d.weights.size()) != d.strategy_count()) {
    throw invariant_error("decomposition weight count does not match scenario");
  }
  double sum = 0.0;
  for (double q : d.weights) {
    if (!(q >= -1e-12)) {
      throw invariant_error("negative weight in decomposition");
    }
    sum += q;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "decomposition weights sum to " << sum;
    throw invariant_error(os.str());
  }
}

JointDistribution mixture_distribution(const LocalDecomposition& d) {
  validate_decomposition(d);
  const int nx = d.nx;
  const int ny = d.ny;
  std::vector<std::vector<double>> oa(nx, {1.0, -1.0});
  std::vector<std::vector<double>> ob(ny, {1.0, -1.0});
  std::vector<std::vector<std::vector<std::vector<double>>>> table(
      nx, std::vector<std::vector<std::vector<double>>>(
              ny, std::vector<std::vector<double>>(2,
                                                   std::vector<double>(2, 0))));
  for (int k = 0; k < d.strategy_count(); ++k) {
    const double q = d.weights[k];
    if (q == 0.0) continue;
    for (int x = 0; x < nx; ++x) {
      const int a = (k >> x) & 1 ? 0 : 1;
      for (int y = 0; y < ny; ++y) {
        const int b = (k >> (nx + y)) & 1 ? 0 : 1;
        table[x][y][a][b] += q;
      }
    }
  }
  return JointDistribution(std::move(oa), std::move(ob), std::move(table));
}

}  // namespace covbell
