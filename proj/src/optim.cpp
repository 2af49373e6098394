#include "covbell/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace covbell {

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, const NelderMeadOptions& opts,
    const std::function<void(std::vector<double>&)>& project) {
  const std::size_t n = x0.size();
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  auto eval = [&](std::vector<double>& x) {
    if (project) project(x);
    return f(x);
  };

  // Initial simplex: x0 plus one step along each coordinate.
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  vals[0] = eval(pts[0]);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i + 1][i] += opts.init_step;
    vals[i + 1] = eval(pts[i + 1]);
  }

  NelderMeadResult res;
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return vals[a] < vals[b];
                     });
    const std::size_t best = order[0], worst = order[n],
                      second_worst = order[n - 1];
    if (vals[worst] - vals[best] < opts.f_tol) {
      res.converged = true;
      break;
    }
    // Centroid of all but the worst point.
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    for (std::size_t j = 0; j < n; ++j) {
      xr[j] = centroid[j] + alpha * (centroid[j] - pts[worst][j]);
    }
    double fr = eval(xr);
    if (fr < vals[best]) {
      for (std::size_t j = 0; j < n; ++j) {
        xe[j] = centroid[j] + gamma * (xr[j] - centroid[j]);
      }
      double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[second_worst]) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        xc[j] = centroid[j] + rho * (pts[worst][j] - centroid[j]);
      }
      double fc = eval(xc);
      if (fc < vals[worst]) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        // Shrink toward the best vertex.
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < n; ++j) {
            pts[i][j] = pts[best][j] + sigma * (pts[i][j] - pts[best][j]);
          }
          vals[i] = eval(pts[i]);
        }
      }
    }
  }
  res.iterations = it;
  std::size_t bi = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (vals[i] < vals[bi]) bi = i;
  }
  res.x = pts[bi];
  res.value = vals[bi];
  return res;
}

double golden_section_min(const std::function<double(double)>& f, double a,
                          double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return (a + b) / 2.0;
}

void project_to_simplex(std::vector<double>& v) {
  // Sort-based projection: find the largest k such that the shifted top-k
  // entries stay positive, then clip.
  const std::size_t n = v.size();
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) {
      theta = t;
      k = i + 1;
    }
  }
  (void)k;
  for (double& x : v) x = std::max(0.0, x - theta);
  // Normalize away any residual rounding so downstream validation at 1e-12
  // never trips.
  double s = std::accumulate(v.begin(), v.end(), 0.0);
  if (s > 0) {
    for (double& x : v) x /= s;
  } else {
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(n));
  }
}

std::vector<double> random_simplex_point(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> uni(1e-12, 1.0);
  std::vector<double> q(n);
  double sum = 0.0;
  for (double& x : q) {
    x = -std::log(uni(rng));
    sum += x;
  }
  for (double& x : q) x /= sum;
  return q;
}

std::mt19937_64 rng_for_restart(std::uint64_t base_seed, std::uint64_t k) {
  // splitmix64 of (seed, k): decorrelates nearby restart indices.
  std::uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  return std::mt19937_64(z);
}

void parallel_chunks(std::size_t n, int jobs,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& work,
                     const std::function<void(std::size_t)>& merge) {
  if (n == 0) return;
  std::size_t nchunks =
      jobs <= 1 ? 1 : std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  std::vector<std::size_t> begins(nchunks + 1);
  for (std::size_t c = 0; c <= nchunks; ++c) {
    begins[c] = n * c / nchunks;
  }
  if (nchunks == 1) {
    work(0, 0, n);
    merge(0);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(nchunks);
  for (std::size_t c = 0; c < nchunks; ++c) {
    threads.emplace_back(
        [&, c]() { work(c, begins[c], begins[c + 1]); });
  }
  for (auto& t : threads) t.join();
  for (std::size_t c = 0; c < nchunks; ++c) merge(c);
}

}  // namespace covbell
