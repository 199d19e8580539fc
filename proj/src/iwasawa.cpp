#include "ztower/iwasawa.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "ztower/errors.hpp"
#include "ztower/jacobian.hpp"

namespace ztower {

VertexOrder char_vertex_order(const TowerSpec& spec) {
  VertexOrder vo;
  for (VertexId v = 0; v < spec.base.vertex_count(); ++v)
    if (!spec.ramified(v)) vo.order.push_back(v);
  vo.unramified = vo.order.size();
  for (VertexId v = 0; v < spec.base.vertex_count(); ++v)
    if (spec.ramified(v)) vo.order.push_back(v);
  return vo;
}

Exponents canonical_sigma(const std::vector<Exponents>& gens, const GroupSpec& group) {
  const std::size_t d = group.d;
  IntMatrix m(gens.size(), d);
  for (std::size_t r = 0; r < gens.size(); ++r)
    for (std::size_t c = 0; c < d; ++c) m(r, c) = static_cast<long>(gens[r].at(c));
  const IntMatrix h = hermite_normal_form(m);
  if (h.rows() != 1) throw std::invalid_argument("canonical_sigma: inertia group is not of rank one");
  BigInt g = 0;
  for (std::size_t c = 0; c < d; ++c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), h(0, c).get_mpz_t());
  // h = g * w with w primitive; only the p-part of g changes the closed subgroup.
  BigInt p_part = 1;
  BigInt rest = g;
  while (mpz_divisible_ui_p(rest.get_mpz_t(), group.p)) {
    mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), group.p);
    p_part *= static_cast<unsigned long>(group.p);
  }
  Exponents sigma(d);
  int sign = 0;
  for (std::size_t c = 0; c < d; ++c) {
    BigInt w = h(0, c) / g;
    if (sign == 0 && w != 0) sign = w > 0 ? 1 : -1;
    sigma[c] = BigInt(w * p_part * sign).get_si();
  }
  return sigma;
}

LaurentMatrix matrix_D(const TowerSpec& spec) {
  const VertexOrder vo = char_vertex_order(spec);
  const std::size_t s = vo.order.size();
  const std::size_t d = spec.group.d;
  LaurentMatrix m(s, std::vector<LaurentElement>(s, LaurentElement(d)));
  for (std::size_t i = 0; i < vo.unramified; ++i)
    m[i][i] = LaurentElement::constant(d, static_cast<unsigned long>(degree(spec.base, vo.order[i])));
  return m;
}

LaurentMatrix matrix_B(const TowerSpec& spec) {
  const VertexOrder vo = char_vertex_order(spec);
  const std::size_t s = vo.order.size();
  const std::size_t d = spec.group.d;
  std::vector<std::size_t> position(spec.base.vertex_count());
  for (std::size_t i = 0; i < s; ++i) position[vo.order[i]] = i;
  LaurentMatrix m(s, std::vector<LaurentElement>(s, LaurentElement(d)));
  for (std::size_t j = 0; j < vo.unramified; ++j)
    for (DartId e : spec.base.outgoing(vo.order[j])) m[position[spec.base.terminus(e)]][j].add_term(spec.voltage[e], 1);
  for (std::size_t i = vo.unramified; i < s; ++i) {
    const auto& gens = spec.inertia[vo.order[i]];
    if (inertia_rank(gens, d) == 1) {
      // -(g^sigma - 1)
      m[i][i].add_term(canonical_sigma(gens, spec.group), -1);
      m[i][i].add_term(Exponents(d, 0), 1);
    } else {
      m[i][i] = LaurentElement::constant(d, -1);
    }
  }
  return m;
}

LaurentMatrix subtract(const LaurentMatrix& a, const LaurentMatrix& b) {
  LaurentMatrix r = a;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r[i].size(); ++j) r[i][j] -= b[i][j];
  return r;
}

namespace {

std::size_t matrix_dim(const LaurentMatrix& m) {
  for (const auto& row : m)
    if (row.size() != m.size()) throw std::invalid_argument("determinant of a non-square matrix");
  return m.size();
}

std::size_t rank_of(const LaurentMatrix& m) {
  for (const auto& row : m)
    for (const auto& x : row) return x.dim();
  return 1;
}

LaurentElement cofactor_rec(const LaurentMatrix& m, std::vector<std::size_t>& cols, std::size_t row, std::size_t d) {
  if (row == m.size()) return LaurentElement::constant(d, 1);
  LaurentElement acc(d);
  int sign = 1;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const std::size_t c = cols[k];
    if (!m[row][c].is_zero()) {
      cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(k));
      LaurentElement sub = m[row][c] * cofactor_rec(m, cols, row + 1, d);
      cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(k), c);
      if (sign > 0)
        acc += sub;
      else
        acc -= sub;
    }
    sign = -sign;
  }
  return acc;
}

}  // namespace

LaurentElement det_cofactor(const LaurentMatrix& m) {
  const std::size_t s = matrix_dim(m);
  std::vector<std::size_t> cols(s);
  for (std::size_t i = 0; i < s; ++i) cols[i] = i;
  return cofactor_rec(m, cols, 0, rank_of(m));
}

LaurentElement det_bareiss(const LaurentMatrix& input) {
  const std::size_t s = matrix_dim(input);
  const std::size_t d = rank_of(input);
  if (s == 0) return LaurentElement::constant(d, 1);
  LaurentMatrix m = input;
  bool negate = false;
  LaurentElement prev = LaurentElement::constant(d, 1);
  for (std::size_t k = 0; k + 1 < s; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < s && m[r][k].is_zero()) ++r;
      if (r == s) return LaurentElement(d);
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < s; ++i) {
      for (std::size_t j = k + 1; j < s; ++j) {
        LaurentElement num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        auto q = num.divide_exact(prev);
        if (!q) throw std::logic_error("det_bareiss: inexact division");
        m[i][j] = std::move(*q);
      }
      m[i][k] = LaurentElement(d);
    }
    prev = m[k][k];
  }
  return negate ? -m[s - 1][s - 1] : m[s - 1][s - 1];
}

LaurentElement det_laurent(const LaurentMatrix& m) {
  return matrix_dim(m) <= 6 ? det_cofactor(m) : det_bareiss(m);
}

ClearedPoly to_poly(const LaurentElement& x) {
  const Exponents lo = x.min_exponents();
  Exponents k(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) k[i] = -lo[i];
  return ClearedPoly{IwasawaPoly::from_group_ring(x.shifted(k)), k};
}

MuLambda mu_lambda(const IwasawaPoly& f, std::uint64_t p) {
  if (f.is_zero()) throw std::domain_error("mu_lambda: zero characteristic element");
  std::size_t mu = SIZE_MAX;
  for (const auto& [e, c] : f.terms()) mu = std::min(mu, ord_p(c, p));
  std::int64_t lambda = INT64_MAX;
  for (const auto& [e, c] : f.terms()) {
    if (ord_p(c, p) != mu) continue;
    std::int64_t deg = 0;
    for (auto x : e) deg += x;
    lambda = std::min(lambda, deg);
  }
  return MuLambda{mu, static_cast<std::size_t>(lambda)};
}

CharElement make_char(const IwasawaPoly& poly, std::uint64_t p) {
  CharElement c;
  c.poly = poly;
  c.clearing = Exponents(poly.dim(), 0);
  const MuLambda ml = mu_lambda(poly, p);
  c.mu = ml.mu;
  c.lambda = ml.lambda;
  return c;
}

CharElement char_element(const TowerSpec& spec) {
  if (auto problem = check_tower_spec(spec)) throw SpecError("", *problem);
  const LaurentElement det = det_laurent(subtract(matrix_D(spec), matrix_B(spec)));
  if (det.is_zero()) throw NonTorsionError("det(D - B) = 0: the Picard module is not torsion");
  ClearedPoly cp = to_poly(det);
  CharElement c = make_char(cp.poly, spec.group.p);
  c.clearing = cp.clearing;
  const int n0 = stabilization_level(spec);
  try {
    if (!is_connected_layer(spec, n0)) c.warnings.push_back("layer " + std::to_string(n0) + " is disconnected");
  } catch (const GuardrailError&) {
    c.warnings.push_back("connectivity of layer " + std::to_string(n0) + " not checked (too large)");
  }
  return c;
}

CharElement char_of_jacobian(const CharElement& c, std::size_t d, std::uint64_t p) {
  if (d >= 2) return c;
  auto q = c.poly.divide_exact(IwasawaPoly::variable(1, 0));
  if (!q) throw std::domain_error("characteristic element " + c.poly.to_string() + " is not divisible by T");
  CharElement out = make_char(*q, p);
  out.clearing = c.clearing;
  out.warnings = c.warnings;
  return out;
}

namespace {

IwasawaPoly strip_unit_factors(IwasawaPoly f) {
  const std::size_t d = f.dim();
  for (std::size_t i = 0; i < d; ++i) {
    const IwasawaPoly g = IwasawaPoly::variable(d, i) + IwasawaPoly::constant(d, 1);
    while (true) {
      auto q = f.divide_exact(g);
      if (!q) break;
      f = std::move(*q);
    }
  }
  return f;
}

Exponents min_exps(const IwasawaPoly& f) {
  Exponents m(f.dim(), INT64_MAX);
  for (const auto& [e, c] : f.terms())
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
  return m;
}

IwasawaPoly drop_monomial(const IwasawaPoly& f, const Exponents& m) {
  LaurentElement body(f.dim());
  for (const auto& [e, c] : f.terms()) {
    Exponents x = e;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= m[i];
    body.add_term(x, c);
  }
  return IwasawaPoly(std::move(body));
}

bool p_unit(const mpq_class& x, std::uint64_t p) {
  return !mpz_divisible_ui_p(x.get_num_mpz_t(), p) && !mpz_divisible_ui_p(x.get_den_mpz_t(), p);
}

bool p_integral(const mpq_class& x, std::uint64_t p) { return !mpz_divisible_ui_p(x.get_den_mpz_t(), p); }

// All exponent vectors of total degree <= n, ascending graded order.
std::vector<Exponents> monomials_up_to(std::size_t d, std::int64_t n) {
  std::vector<Exponents> out;
  Exponents e(d, 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (i == d) {
      out.push_back(e);
      return;
    }
    for (std::int64_t k = 0; k <= left; ++k) {
      e[i] = k;
      rec(i + 1, left - k);
    }
    e[i] = 0;
  };
  rec(0, n);
  std::sort(out.begin(), out.end(), grlex_less);
  return out;
}

}  // namespace

bool chars_equal_up_to_unit(const IwasawaPoly& a_in, const IwasawaPoly& b_in, std::uint64_t p) {
  if (a_in.dim() != b_in.dim()) return false;
  if (a_in.is_zero() || b_in.is_zero()) return a_in.is_zero() && b_in.is_zero();
  if (mu_lambda(a_in, p) != mu_lambda(b_in, p)) return false;
  IwasawaPoly a = strip_unit_factors(a_in);
  IwasawaPoly b = strip_unit_factors(b_in);
  a = a.scaled_down(a.content());
  b = b.scaled_down(b.content());
  const Exponents ma = min_exps(a);
  if (ma != min_exps(b)) return false;
  a = drop_monomial(a, ma);
  b = drop_monomial(b, ma);
  const BigInt a0 = a.constant_term();
  const BigInt b0 = b.constant_term();
  if ((a0 == 0) != (b0 == 0)) return false;
  if (b0 == 0) {
    auto q = a.divide_exact(b);
    return q && q->constant_term() != 0 && !mpz_divisible_ui_p(q->constant_term().get_mpz_t(), p);
  }
  const std::int64_t n = std::max<std::int64_t>(1, 2 * std::max(a.total_degree(), b.total_degree()));
  const std::size_t d = a.dim();
  std::map<Exponents, mpq_class> q;
  const mpq_class inv_b0 = mpq_class(1) / mpq_class(b0);
  for (const Exponents& m : monomials_up_to(d, n)) {
    mpq_class acc(a.coefficient(m));
    for (const auto& [k, bk] : b.terms()) {
      bool nonzero = false, fits = true;
      Exponents rest(d);
      for (std::size_t i = 0; i < d; ++i) {
        if (k[i] > m[i]) fits = false;
        if (k[i] != 0) nonzero = true;
        rest[i] = m[i] - k[i];
      }
      if (!fits || !nonzero) continue;
      auto it = q.find(rest);
      if (it != q.end()) acc -= it->second * mpq_class(bk);
    }
    acc *= inv_b0;
    acc.canonicalize();
    if (!p_integral(acc, p)) return false;
    if (acc != 0) q.emplace(m, acc);
  }
  auto c0 = q.find(Exponents(d, 0));
  return c0 != q.end() && p_unit(c0->second, p);
}

bool chars_equal_up_to_unit(const CharElement& a, const CharElement& b, std::uint64_t p) {
  return chars_equal_up_to_unit(a.poly, b.poly, p);
}

}  // namespace ztower
