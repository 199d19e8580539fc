#include "ztower/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ztower {

namespace {

Exponents add(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Exponents sub(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

std::int64_t total(const Exponents& e) { return std::accumulate(e.begin(), e.end(), std::int64_t{0}); }

bool nonnegative(const Exponents& e) {
  return std::all_of(e.begin(), e.end(), [](std::int64_t x) { return x >= 0; });
}

const std::pair<const Exponents, BigInt>& grlex_leading(const LaurentElement::TermMap& t) {
  auto best = t.begin();
  for (auto it = t.begin(); it != t.end(); ++it)
    if (grlex_less(best->first, it->first)) best = it;
  return *best;
}

// Exact division of polynomials (nonnegative exponents) by leading terms in
// graded order; the quotient must have nonnegative exponents.
std::optional<LaurentElement> poly_divide(const LaurentElement& a, const LaurentElement& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  LaurentElement q(a.dim());
  LaurentElement r = a;
  const auto& [lb, cb] = grlex_leading(b.terms());
  const Exponents lead_b = lb;
  const BigInt coeff_b = cb;
  while (!r.is_zero()) {
    const auto& [la, ca] = grlex_leading(r.terms());
    Exponents e = sub(la, lead_b);
    if (!nonnegative(e)) return std::nullopt;
    if (!mpz_divisible_p(ca.get_mpz_t(), coeff_b.get_mpz_t())) return std::nullopt;
    BigInt c;
    mpz_divexact(c.get_mpz_t(), ca.get_mpz_t(), coeff_b.get_mpz_t());
    q.add_term(e, c);
    for (const auto& [eb, vb] : b.terms()) r.add_term(add(eb, e), -c * vb);
  }
  return q;
}

std::string variable_name(std::size_t d, std::size_t i, const char* stem) {
  return d == 1 ? std::string(stem) : std::string(stem) + std::to_string(i + 1);
}

std::string format_terms(const std::vector<std::pair<Exponents, BigInt>>& terms, std::size_t d, const char* stem) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms) {
    BigInt mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    const bool is_const = std::all_of(e.begin(), e.end(), [](std::int64_t x) { return x == 0; });
    if (mag != 1 || is_const) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << "*";
      os << variable_name(d, i, stem);
      if (e[i] != 1) os << "^" << e[i];
      wrote = true;
    }
  }
  return os.str();
}

// (x + shift)^k expanded as coefficients of x^0..x^k.
std::vector<BigInt> binomial_row(std::int64_t k, long shift) {
  std::vector<BigInt> row(static_cast<std::size_t>(k) + 1);
  BigInt sh = shift;
  for (std::int64_t j = 0; j <= k; ++j) {
    BigInt binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(j));
    BigInt pw;
    mpz_pow_ui(pw.get_mpz_t(), sh.get_mpz_t(), static_cast<unsigned long>(k - j));
    row[j] = binom * pw;
  }
  return row;
}

}  // namespace

bool grlex_less(const Exponents& a, const Exponents& b) {
  const auto ta = total(a), tb = total(b);
  if (ta != tb) return ta < tb;
  return a < b;
}

LaurentElement LaurentElement::constant(std::size_t d, const BigInt& c) {
  LaurentElement x(d);
  x.add_term(Exponents(d, 0), c);
  return x;
}

LaurentElement LaurentElement::monomial(const Exponents& e, const BigInt& c) {
  LaurentElement x(e.size());
  x.add_term(e, c);
  return x;
}

BigInt LaurentElement::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? BigInt(0) : it->second;
}

void LaurentElement::add_term(const Exponents& e, const BigInt& c) {
  if (e.size() != d_) throw std::invalid_argument("LaurentElement: exponent length mismatch");
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void LaurentElement::check_dim(const LaurentElement& o) const {
  if (o.d_ != d_) throw std::invalid_argument("LaurentElement: rank mismatch");
}

LaurentElement& LaurentElement::operator+=(const LaurentElement& o) {
  check_dim(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentElement& LaurentElement::operator-=(const LaurentElement& o) {
  check_dim(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LaurentElement LaurentElement::operator-() const {
  LaurentElement r(d_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

LaurentElement operator*(const LaurentElement& a, const LaurentElement& b) {
  a.check_dim(b);
  LaurentElement r(a.d_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(add(ea, eb), ca * cb);
  return r;
}

LaurentElement LaurentElement::shifted(const Exponents& shift) const {
  if (shift.size() != d_) throw std::invalid_argument("LaurentElement: shift length mismatch");
  LaurentElement r(d_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(add(e, shift), c);
  return r;
}

Exponents LaurentElement::min_exponents() const {
  Exponents m(d_, 0);
  bool first = true;
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < d_; ++i) m[i] = first ? e[i] : std::min(m[i], e[i]);
    first = false;
  }
  return m;
}

std::optional<LaurentElement> LaurentElement::divide_exact(const LaurentElement& b) const {
  check_dim(b);
  if (b.is_zero()) throw std::domain_error("LaurentElement: division by zero");
  if (is_zero()) return LaurentElement(d_);
  // Both sides shifted so that no variable divides them; the quotient of such
  // polynomials is a polynomial whenever it exists in the group ring.
  const Exponents sa = min_exponents();
  const Exponents sb = b.min_exponents();
  Exponents neg_a(d_), neg_b(d_);
  for (std::size_t i = 0; i < d_; ++i) {
    neg_a[i] = -sa[i];
    neg_b[i] = -sb[i];
  }
  auto q = poly_divide(shifted(neg_a), b.shifted(neg_b));
  if (!q) return std::nullopt;
  return q->shifted(sub(sa, sb));
}

std::string LaurentElement::to_string() const {
  std::vector<std::pair<Exponents, BigInt>> t(terms_.begin(), terms_.end());
  return format_terms(t, d_, "g");
}

IwasawaPoly::IwasawaPoly(LaurentElement body) : body_(std::move(body)) {
  for (const auto& [e, c] : body_.terms())
    if (!nonnegative(e)) throw std::invalid_argument("IwasawaPoly: negative exponent");
}

IwasawaPoly IwasawaPoly::constant(std::size_t d, const BigInt& c) {
  return IwasawaPoly(LaurentElement::constant(d, c));
}

IwasawaPoly IwasawaPoly::variable(std::size_t d, std::size_t i) {
  Exponents e(d, 0);
  e.at(i) = 1;
  return IwasawaPoly(LaurentElement::monomial(e));
}

IwasawaPoly IwasawaPoly::parse(const std::string& text, std::size_t d) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("IwasawaPoly::parse: empty input");
  LaurentElement body(d);
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("IwasawaPoly::parse: " + why + " in '" + text + "'");
  };
  auto read_int = [&]() {
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected integer");
    return s.substr(start, pos - start);
  };
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      fail("expected sign");
    }
    BigInt coeff = sign;
    Exponents e(d, 0);
    bool need_factor = true;
    while (need_factor) {
      if (pos >= s.size()) fail("dangling operator");
      if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
        coeff *= BigInt(read_int());
      } else if (s[pos] == 'T') {
        ++pos;
        std::size_t var = 0;
        if (d > 1) {
          var = std::stoul(read_int());
          if (var < 1 || var > d) fail("variable index out of range");
          --var;
        }
        std::int64_t power = 1;
        if (pos < s.size() && s[pos] == '^') {
          ++pos;
          power = std::stoll(read_int());
        }
        e[var] += power;
      } else {
        fail("unexpected character");
      }
      need_factor = pos < s.size() && s[pos] == '*';
      if (need_factor) ++pos;
    }
    body.add_term(e, coeff);
  }
  return IwasawaPoly(std::move(body));
}

BigInt IwasawaPoly::constant_term() const { return body_.coefficient(Exponents(dim(), 0)); }

std::int64_t IwasawaPoly::total_degree() const {
  std::int64_t deg = 0;
  for (const auto& [e, c] : terms()) deg = std::max(deg, total(e));
  return deg;
}

std::optional<IwasawaPoly> IwasawaPoly::divide_exact(const IwasawaPoly& b) const {
  if (b.dim() != dim()) throw std::invalid_argument("IwasawaPoly: rank mismatch");
  auto q = poly_divide(body_, b.body_);
  if (!q) return std::nullopt;
  return IwasawaPoly(std::move(*q));
}

BigInt IwasawaPoly::content() const {
  BigInt g = 0;
  for (const auto& [e, c] : terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

IwasawaPoly IwasawaPoly::scaled_down(const BigInt& c) const {
  LaurentElement r(dim());
  for (const auto& [e, v] : terms()) {
    if (!mpz_divisible_p(v.get_mpz_t(), c.get_mpz_t())) throw std::domain_error("IwasawaPoly: inexact scaling");
    BigInt q;
    mpz_divexact(q.get_mpz_t(), v.get_mpz_t(), c.get_mpz_t());
    r.add_term(e, q);
  }
  return IwasawaPoly(std::move(r));
}

namespace {

LaurentElement substitute_shifted(const LaurentElement& x, long shift) {
  const std::size_t d = x.dim();
  LaurentElement out(d);
  for (const auto& [e, c] : x.terms()) {
    LaurentElement prod = LaurentElement::constant(d, c);
    for (std::size_t i = 0; i < d; ++i) {
      if (e[i] == 0) continue;
      if (e[i] < 0) throw std::invalid_argument("substitution needs nonnegative exponents");
      const auto row = binomial_row(e[i], shift);
      LaurentElement factor(d);
      for (std::size_t j = 0; j < row.size(); ++j) {
        Exponents m(d, 0);
        m[i] = static_cast<std::int64_t>(j);
        factor.add_term(m, row[j]);
      }
      prod = prod * factor;
    }
    out += prod;
  }
  return out;
}

}  // namespace

LaurentElement IwasawaPoly::to_group_ring() const { return substitute_shifted(body_, -1); }

IwasawaPoly IwasawaPoly::from_group_ring(const LaurentElement& x) { return IwasawaPoly(substitute_shifted(x, 1)); }

std::vector<std::pair<Exponents, BigInt>> IwasawaPoly::grlex_terms() const {
  std::vector<std::pair<Exponents, BigInt>> t(terms().begin(), terms().end());
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return grlex_less(a.first, b.first); });
  return t;
}

std::string IwasawaPoly::to_string() const { return format_terms(grlex_terms(), dim(), "T"); }

}  // namespace ztower
