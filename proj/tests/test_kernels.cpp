#include "covbell/kernels.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <vector>

namespace k = covbell::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = unif(rng);
  return v;
}

struct BackendGuard {
  k::Backend saved = k::active_backend();
  ~BackendGuard() { k::set_backend(saved); }
};

}  // namespace

TEST_CASE("scalar kernels match hand values") {
  const double a[] = {1, 2, 3};
  const double b[] = {4, 5, 6};
  CHECK(k::detail::dot_scalar(a, b, 3) == 32.0);

  const double eye[] = {1, 0, 0, 1};
  const double q[] = {0.25, 0.75};
  CHECK(k::detail::quad_form_scalar(eye, q, 2) ==
        Catch::Approx(0.25 * 0.25 + 0.75 * 0.75));

  const double m[] = {1, 2, 3, 4, 5, 6};  // 2x3
  const double x[] = {1, 1, 1};
  double y[2];
  k::detail::matvec_scalar(m, x, y, 2, 3);
  CHECK(y[0] == 6.0);
  CHECK(y[1] == 15.0);
}

TEST_CASE("active backend agrees with the scalar reference") {
  BackendGuard guard;
  REQUIRE(k::set_backend(k::best_backend()));
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 33u, 64u}) {
    const auto a = random_vector(rng, n);
    const auto b = random_vector(rng, n);
    const auto m = random_vector(rng, n * n);
    CHECK(k::dot(a.data(), b.data(), n) ==
          Catch::Approx(k::detail::dot_scalar(a.data(), b.data(), n))
              .margin(1e-12));
    CHECK(k::quad_form(m.data(), a.data(), n) ==
          Catch::Approx(k::detail::quad_form_scalar(m.data(), a.data(), n))
              .margin(1e-12)
              .epsilon(1e-12));
    std::vector<double> y1(n), y2(n);
    k::matvec(m.data(), a.data(), y1.data(), n, n);
    k::detail::matvec_scalar(m.data(), a.data(), y2.data(), n, n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(y1[i] == Catch::Approx(y2[i]).margin(1e-12));
    }
  }
}

TEST_CASE("rectangular matvec shapes") {
  BackendGuard guard;
  std::mt19937_64 rng(11);
  const std::vector<std::pair<std::size_t, std::size_t>> shapes = {
      {3, 16}, {8, 5}, {1, 9}, {16, 1}};
  for (auto [rows, cols] : shapes) {
    const auto m = random_vector(rng, rows * cols);
    const auto x = random_vector(rng, cols);
    std::vector<double> ya(rows), ys(rows);
    k::matvec(m.data(), x.data(), ya.data(), rows, cols);
    k::detail::matvec_scalar(m.data(), x.data(), ys.data(), rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      CHECK(ya[i] == Catch::Approx(ys[i]).margin(1e-12));
    }
  }
}

TEST_CASE("backend selection is honest about availability") {
  BackendGuard guard;
  CHECK(k::set_backend(k::Backend::scalar));
  CHECK(k::active_backend() == k::Backend::scalar);
#if defined(__x86_64__)
  const bool have = k::best_backend() == k::Backend::avx2;
  CHECK(k::set_backend(k::Backend::avx2) == have);
  CHECK_FALSE(k::set_backend(k::Backend::neon));
  CHECK(k::active_backend() ==
        (have ? k::Backend::avx2 : k::Backend::scalar));
#endif
#if defined(__aarch64__)
  CHECK_FALSE(k::set_backend(k::Backend::avx2));
#endif
  CHECK(k::backend_name(k::Backend::scalar) == std::string("scalar"));
}
