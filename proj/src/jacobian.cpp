#include "ztower/jacobian.hpp"

#include <stdexcept>

#include "ztower/errors.hpp"

namespace ztower {

namespace {

// Bareiss is quicker on small minors, the multi-modular route on large ones.
BigInt minor_determinant(const IntMatrix& m) {
  return m.rows() <= 40 ? determinant(m) : determinant_modular(m);
}

}  // namespace

IntMatrix laplacian(const Graph& g) {
  const std::size_t n = g.vertex_count();
  IntMatrix l(n, n);
  for (const Dart& d : g.darts()) {
    l(d.origin, d.origin) += 1;
    l(d.origin, d.terminus) -= 1;
  }
  return l;
}

BigInt kappa(const Graph& g) {
  if (!is_connected(g)) throw DisconnectedError(-1, "kappa: graph is disconnected");
  const std::size_t n = g.vertex_count();
  if (n == 1) return 1;
  const IntMatrix l = laplacian(g);
  const BigInt first = minor_determinant(l.minor_matrix(n - 1, n - 1));
  const BigInt second = minor_determinant(l.minor_matrix(0, 0));
  if (first != second) throw std::logic_error("kappa: principal minors disagree");
  return first;
}

AbelianGroup jacobian_invariants(const Graph& g) {
  AbelianGroup pic = cokernel(laplacian(g));
  if (pic.free_rank != 1) throw DisconnectedError(-1, "jacobian_invariants: Laplacian cokernel has free rank " + std::to_string(pic.free_rank));
  pic.free_rank = 0;
  return pic;
}

AbelianGroup picard_invariants(const Graph& g) { return cokernel(laplacian(g)); }

std::size_t ord_p(const BigInt& x, std::uint64_t p) {
  if (x == 0) throw std::domain_error("ord_p: undefined for 0");
  BigInt v = abs(x);
  std::size_t k = 0;
  while (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
    ++k;
  }
  return k;
}

}  // namespace ztower
