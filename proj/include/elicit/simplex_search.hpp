#ifndef ELICIT_SIMPLEX_SEARCH_HPP
#define ELICIT_SIMPLEX_SEARCH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace elicit {

template <std::size_t N>
struct SimplexResult {
  std::array<double, N> point{};
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

struct SimplexOptions {
  int max_iterations = 2000;
  /// Stop once the spread of vertex values is below this (absolute plus relative to the best value).
  double value_tolerance = 1e-14;
  /// ... and the simplex diameter is below this.
  double point_tolerance = 1e-12;
};

/// Nelder-Mead downhill simplex with standard coefficients (reflect 1, expand 2, contract 1/2, shrink 1/2).
/// Deterministic: identical inputs give identical iterates. NaN objective values rank as worst.
template <std::size_t N, class Objective>
SimplexResult<N> simplex_minimize(Objective&& objective, const std::array<double, N>& start,
                                  const std::array<double, N>& step, const SimplexOptions& options = {}) {
  using Point = std::array<double, N>;
  struct Vertex {
    Point x;
    double f;
  };
  auto eval = [&](const Point& x) {
    const double f = objective(x);
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
  };

  std::array<Vertex, N + 1> simplex;
  simplex[0] = {start, eval(start)};
  for (std::size_t i = 0; i < N; ++i) {
    Point x = start;
    x[i] += step[i];
    simplex[i + 1] = {x, eval(x)};
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  auto along = [](const Point& from, const Point& to, double t) {
    Point r;
    for (std::size_t i = 0; i < N; ++i) r[i] = from[i] + t * (to[i] - from[i]);
    return r;
  };

  SimplexResult<N> result;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    const Vertex& best = simplex.front();
    const Vertex& worst = simplex.back();

    double diameter = 0.0;
    for (std::size_t v = 1; v <= N; ++v)
      for (std::size_t i = 0; i < N; ++i) diameter = std::max(diameter, std::fabs(simplex[v].x[i] - best.x[i]));
    const double spread = worst.f - best.f;
    if (spread <= options.value_tolerance * (1.0 + std::fabs(best.f)) && diameter <= options.point_tolerance) {
      result.converged = true;
      break;
    }

    Point centroid{};
    for (std::size_t v = 0; v < N; ++v)
      for (std::size_t i = 0; i < N; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(N);

    const Point reflected = along(centroid, worst.x, -1.0);
    const double f_reflected = eval(reflected);
    if (f_reflected < best.f) {
      const Point expanded = along(centroid, worst.x, -2.0);
      const double f_expanded = eval(expanded);
      simplex.back() = f_expanded < f_reflected ? Vertex{expanded, f_expanded} : Vertex{reflected, f_reflected};
      continue;
    }
    if (f_reflected < simplex[N - 1].f) {
      simplex.back() = {reflected, f_reflected};
      continue;
    }
    const bool outside = f_reflected < worst.f;
    const Point contracted = outside ? along(centroid, reflected, 0.5) : along(centroid, worst.x, 0.5);
    const double f_contracted = eval(contracted);
    if (f_contracted < (outside ? f_reflected : worst.f)) {
      simplex.back() = {contracted, f_contracted};
      continue;
    }
    for (std::size_t v = 1; v <= N; ++v) {
      simplex[v].x = along(simplex[0].x, simplex[v].x, 0.5);
      simplex[v].f = eval(simplex[v].x);
    }
  }
  std::stable_sort(simplex.begin(), simplex.end(), by_value);
  result.point = simplex.front().x;
  result.value = simplex.front().f;
  result.iterations = iter;
  return result;
}

}  // namespace elicit

#endif  // ELICIT_SIMPLEX_SEARCH_HPP
