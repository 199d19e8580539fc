#include "ztower/growth.hpp"

#include <future>
#include <sstream>
#include <stdexcept>

#include "ztower/errors.hpp"
#include "ztower/jacobian.hpp"

namespace ztower {

namespace {

BigInt power(std::uint64_t p, std::size_t e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, e);
  return r;
}

struct LayerStats {
  bool connected = false;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  BigInt kappa;
};

LayerStats layer_stats(const TowerSpec& spec, int n) {
  const LayerGraph layer = build_layer(spec, n);
  LayerStats s;
  s.vertices = layer.graph.vertex_count();
  s.edges = layer.graph.edge_count();
  s.connected = is_connected(layer.graph);
  if (s.connected) s.kappa = kappa(layer.graph);
  return s;
}

}  // namespace

BigInt projected_vertex_count(const TowerSpec& spec, int n) {
  BigInt total = 0;
  for (const auto& gens : spec.inertia) total += inertia_image(gens, spec.group, n).coset_count;
  return total;
}

GrowthSeries ord_series(const TowerSpec& spec, int n_max, std::size_t max_vertices) {
  if (auto problem = check_tower_spec(spec)) throw SpecError("", *problem);
  if (n_max < 0) throw std::invalid_argument("ord_series: negative n_max");
  for (int n = 0; n <= n_max; ++n) {
    const BigInt count = projected_vertex_count(spec, n);
    if (count > static_cast<unsigned long>(max_vertices))
      throw GuardrailError("layer " + std::to_string(n) + " would have " + count.get_str() + " vertices (limit " + std::to_string(max_vertices) + ")");
  }
  std::vector<std::future<LayerStats>> jobs;
  for (int n = 0; n <= n_max; ++n) jobs.push_back(std::async(std::launch::async, layer_stats, std::cref(spec), n));
  std::vector<LayerStats> stats;
  for (auto& job : jobs) stats.push_back(job.get());

  GrowthSeries s;
  s.p = spec.group.p;
  s.d = spec.group.d;
  for (int n = 0; n <= n_max; ++n) {
    const LayerStats& st = stats[static_cast<std::size_t>(n)];
    if (!st.connected) throw DisconnectedError(n, "layer " + std::to_string(n) + " is disconnected");
    s.vertices.push_back(st.vertices);
    s.edges.push_back(st.edges);
    s.kappas.push_back(st.kappa);
    s.values.push_back(static_cast<std::int64_t>(ord_p(st.kappa, s.p)));
    if (n > 0 && s.values[n] < s.values[n - 1])
      s.warnings.push_back("ord_p(kappa) decreases from layer " + std::to_string(n - 1) + " to " + std::to_string(n));
  }
  return s;
}

std::optional<D1Fit> fit_d1(const GrowthSeries& s) {
  if (s.d != 1) throw std::invalid_argument("fit_d1 requires d = 1");
  if (s.values.size() < 4) throw std::invalid_argument("fit_d1 needs values for n = 0..3 at least");
  const std::size_t last = s.values.size() - 1;
  const BigInt v2 = static_cast<long>(s.values[last]);
  const BigInt v1 = static_cast<long>(s.values[last - 1]);
  const BigInt v0 = static_cast<long>(s.values[last - 2]);
  // second difference: mu p^(N-2) (p-1)^2
  const BigInt scale = power(s.p, last - 2) * BigInt(static_cast<unsigned long>(s.p - 1)) * BigInt(static_cast<unsigned long>(s.p - 1));
  const BigInt second = v2 - 2 * v1 + v0;
  if (second < 0 || !mpz_divisible_p(second.get_mpz_t(), scale.get_mpz_t())) return std::nullopt;
  const BigInt mu = second / scale;
  const BigInt lambda = (v2 - v1) - mu * (power(s.p, last) - power(s.p, last - 1));
  if (lambda < 0) return std::nullopt;
  const BigInt nu = v2 - mu * power(s.p, last) - lambda * BigInt(static_cast<unsigned long>(last));
  auto predicted = [&](std::size_t n) -> BigInt { return mu * power(s.p, n) + lambda * BigInt(static_cast<unsigned long>(n)) + nu; };
  std::size_t n0 = last;
  while (n0 > 0 && predicted(n0 - 1) == BigInt(static_cast<long>(s.values[n0 - 1]))) --n0;
  return D1Fit{mu.get_si(), lambda.get_si(), nu.get_si(), static_cast<int>(n0)};
}

namespace {

std::vector<BigInt> residuals_of(const GrowthSeries& s, std::int64_t mu, std::int64_t lambda) {
  std::vector<BigInt> r;
  for (std::size_t n = 0; n < s.values.size(); ++n) {
    BigInt x = static_cast<long>(s.values[n]);
    x -= BigInt(static_cast<long>(mu)) * power(s.p, n * s.d);
    x -= BigInt(static_cast<long>(lambda)) * BigInt(static_cast<unsigned long>(n)) * power(s.p, (s.d - 1) * n);
    r.push_back(x);
  }
  return r;
}

}  // namespace

BigInt default_slack(const GrowthSeries& s, std::int64_t mu, std::int64_t lambda) {
  const auto r = residuals_of(s, mu, lambda);
  BigInt c = r.size() > 1 ? BigInt(abs(r[1])) : BigInt(0);
  return c < 1 ? BigInt(1) : c;
}

GrowthCheck check_growth(const GrowthSeries& s, std::int64_t mu, std::int64_t lambda, const BigInt& slack) {
  GrowthCheck g;
  g.residuals = residuals_of(s, mu, lambda);
  g.slack = slack;
  g.pass = true;
  if (s.d == 1 && slack == 0) {
    for (std::size_t n = 2; n < g.residuals.size(); ++n)
      if (g.residuals[n] != g.residuals[1]) g.pass = false;
    return g;
  }
  for (std::size_t n = 1; n < g.residuals.size(); ++n)
    if (abs(g.residuals[n]) > slack * power(s.p, n * (s.d - 1))) g.pass = false;
  return g;
}

Consistency consistency(const TowerSpec& spec, int n_max, std::optional<BigInt> slack) {
  Consistency c;
  c.char_pic = char_element(spec);
  c.char_jac = char_of_jacobian(c.char_pic, spec.group.d, spec.group.p);
  c.series = ord_series(spec, n_max);
  const auto mu = static_cast<std::int64_t>(c.char_jac.mu);
  const auto lambda = static_cast<std::int64_t>(c.char_jac.lambda);
  std::ostringstream msg;
  if (spec.group.d == 1) {
    c.fit = fit_d1(c.series);
    c.check = check_growth(c.series, mu, lambda, 0);
    c.consistent = c.fit && c.fit->mu == mu && c.fit->lambda == lambda;
    msg << "predicted (mu, lambda) = (" << mu << ", " << lambda << "); ";
    if (c.fit)
      msg << "fitted (" << c.fit->mu << ", " << c.fit->lambda << ", nu = " << c.fit->nu << ") from n = " << c.fit->n0;
    else
      msg << "no stable fit";
  } else {
    const BigInt C = slack ? *slack : default_slack(c.series, mu, lambda);
    c.check = check_growth(c.series, mu, lambda, C);
    c.consistent = c.check->pass;
    msg << "predicted (mu, lambda) = (" << mu << ", " << lambda << "); residuals "
        << (c.check->pass ? "within" : "exceed") << " slack " << C.get_str();
  }
  c.message = msg.str();
  return c;
}

}  // namespace ztower
