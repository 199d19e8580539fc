#pragma once

// ord_p(kappa(X_n)) along a tower, the exact d = 1 fit mu p^n + lambda n + nu,
// and residual checks against mu p^(nd) + lambda n p^((d-1)n) for d >= 2.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ztower/iwasawa.hpp"
#include "ztower/tower.hpp"

namespace ztower {

struct GrowthSeries {
  std::uint64_t p = 2;
  std::size_t d = 1;
  std::vector<std::int64_t> values;  // ord_p(kappa(X_n)), n = 0..n_max
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> edges;
  std::vector<BigInt> kappas;
  std::vector<std::string> warnings;
};

inline constexpr std::size_t kDefaultMaxVertices = 100'000;

/// Layers are built concurrently. Throws DisconnectedError carrying the first
/// disconnected level, GuardrailError when a layer would exceed max_vertices.
GrowthSeries ord_series(const TowerSpec& spec, int n_max, std::size_t max_vertices = kDefaultMaxVertices);

/// Vertex count of X_n from coset counts alone.
BigInt projected_vertex_count(const TowerSpec& spec, int n);

struct D1Fit {
  std::int64_t mu = 0;
  std::int64_t lambda = 0;
  std::int64_t nu = 0;
  int n0 = 0;
  bool operator==(const D1Fit&) const = default;
};

/// Solves mu, lambda, nu from the last three values and returns the smallest
/// n0 from which they reproduce the series exactly. nullopt when mu or lambda
/// would not be a natural number. Throws std::invalid_argument unless d = 1
/// and at least four values are present.
std::optional<D1Fit> fit_d1(const GrowthSeries& s);

struct GrowthCheck {
  bool pass = false;
  std::vector<BigInt> residuals;  // n = 0..n_max
  BigInt slack;
};

/// r_n = v_n - mu p^(nd) - lambda n p^((d-1)n). Passes iff |r_n| <= C p^(n(d-1))
/// for every n >= 1; for d = 1 with C = 0 it passes iff r_n is constant for n >= 1.
GrowthCheck check_growth(const GrowthSeries& s, std::int64_t mu, std::int64_t lambda, const BigInt& slack);
/// max(1, |r_1|).
BigInt default_slack(const GrowthSeries& s, std::int64_t mu, std::int64_t lambda);

struct Consistency {
  bool consistent = false;
  CharElement char_pic;
  CharElement char_jac;
  GrowthSeries series;
  std::optional<D1Fit> fit;
  std::optional<GrowthCheck> check;
  std::string message;
};

/// Char element side against the layer side. d = 1 needs n_max >= 3.
Consistency consistency(const TowerSpec& spec, int n_max, std::optional<BigInt> slack = std::nullopt);

}  // namespace ztower
