#include "gbc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace gbc {

namespace {

size_t pow_int(int base, int exp) {
  size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Next strictly increasing combination of size k from {0,..,n-1}.
bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<int> first_combination(int k) {
  std::vector<int> c(k);
  std::iota(c.begin(), c.end(), 0);
  return c;
}

}  // namespace

DenseTensor::DenseTensor(int dim, int rank, Symmetry sym)
    : dim_(dim), rank_(rank), sym_(sym), comps_(pow_int(dim, rank), 0.0) {
  require(dim >= 1, "DenseTensor: dim must be positive");
  require(rank >= 0, "DenseTensor: rank must be nonnegative");
}

DenseTensor DenseTensor::from_components(int dim, int rank, std::vector<double> comps,
                                         Symmetry sym) {
  DenseTensor t(dim, rank, sym);
  require(comps.size() == pow_int(dim, rank),
          "DenseTensor: components length must equal dim^rank");
  t.comps_ = std::move(comps);
  validate_symmetry(t);
  return t;
}

double DenseTensor::max_abs() const {
  double m = 0.0;
  for (double x : comps_) m = std::max(m, std::abs(x));
  return m;
}

double symmetric2_violation(const DenseTensor& t) {
  if (t.rank() != 2) throw std::invalid_argument("symmetric2_violation: rank must be 2");
  double worst = 0.0;
  const int n = t.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      worst = std::max(worst, std::abs(t(i, j) - t(j, i)));
  return worst;
}

double riemann4_violation(const DenseTensor& t) {
  if (t.rank() != 4) throw std::invalid_argument("riemann4_violation: rank must be 4");
  double worst = 0.0;
  const int n = t.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = t(i, j, k, l);
          worst = std::max(worst, std::abs(v + t(j, i, k, l)));
          worst = std::max(worst, std::abs(v + t(i, j, l, k)));
          worst = std::max(worst, std::abs(v - t(k, l, i, j)));
        }
  return worst;
}

void validate_symmetry(const DenseTensor& t, double rel_tol) {
  double viol = 0.0;
  switch (t.symmetry()) {
    case Symmetry::none:
      return;
    case Symmetry::symmetric2:
      viol = symmetric2_violation(t);
      break;
    case Symmetry::riemann4:
      viol = riemann4_violation(t);
      break;
  }
  const double scale = t.max_abs();
  if (viol > rel_tol * std::max(scale, 1e-300))
    throw std::invalid_argument("DenseTensor: declared symmetry violated");
}

namespace detail {

const PermTable& perm_table(int p) {
  static std::map<int, PermTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  PermTable t;
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int inv = 0;
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j)
        if (perm[i] > perm[j]) ++inv;
    t.perms.push_back(perm);
    t.signs.push_back(inv % 2 == 0 ? 1 : -1);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return cache.emplace(p, std::move(t)).first->second;
}

int sequence_perm_sign(std::span<const int> a, std::span<const int> b) {
  const int p = static_cast<int>(a.size());
  if (p > 16) throw std::invalid_argument("sequence_perm_sign: arity too large");
  // Match each b entry to a distinct a position, counting swaps.
  int work[16];
  for (int i = 0; i < p; ++i) work[i] = a[i];
  int sign = 1;
  for (int i = 0; i < p; ++i) {
    int j = i;
    while (j < p && work[j] != b[i]) ++j;
    if (j == p) return 0;
    if (j != i) {
      std::swap(work[i], work[j]);
      sign = -sign;
    }
  }
  return sign;
}

}  // namespace detail

double generalized_delta(std::span<const int> upper, std::span<const int> lower) {
  if (upper.size() != lower.size())
    throw std::invalid_argument("generalized_delta: arity mismatch");
  const int p = static_cast<int>(upper.size());
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (upper[i] == upper[j]) return 0.0;
  return static_cast<double>(detail::sequence_perm_sign(upper, lower));
}

double generalized_delta(const MultiIndex& upper, const MultiIndex& lower) {
  return generalized_delta(std::span<const int>(upper.entries),
                           std::span<const int>(lower.entries));
}

DenseTensor raise_slot(const DenseTensor& t, const DenseTensor& metric_inverse, int slot) {
  require(t.rank() == 4, "raise_slot: rank-4 only");
  require(slot >= 0 && slot < 4, "raise_slot: slot out of range");
  const int n = t.dim();
  DenseTensor out(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          int idx[4] = {i, j, k, l};
          for (int m = 0; m < n; ++m) {
            int src[4] = {i, j, k, l};
            src[slot] = m;
            s += metric_inverse(idx[slot], m) * t(src[0], src[1], src[2], src[3]);
          }
          out(i, j, k, l) = s;
        }
  return out;
}

DenseTensor lower_slot(const DenseTensor& t, const DenseTensor& metric, int slot) {
  return raise_slot(t, metric, slot);
}

double gauss_bonnet_curvature(const DenseTensor& riemann_mixed, int q) {
  require(riemann_mixed.rank() == 4, "gauss_bonnet_curvature: Riemann must be rank 4");
  const int n = riemann_mixed.dim();
  if (q == 0) return 1.0;
  require(q > 0, "gauss_bonnet_curvature: q must be nonnegative");
  if (2 * q >= n)
    throw std::domain_error("gauss_bonnet_curvature: requires 2q < dim");

  const int p = 2 * q;
  const auto& tab = detail::perm_table(p);
  const size_t nperm = tab.perms.size();

  double total = 0.0;
  std::vector<int> combo = first_combination(p);
  do {
    // sum over orderings rho of the lower R-indices and pi of the upper ones;
    // delta^{rho(A)}_{pi(A)} = sgn(rho) sgn(pi)
    for (size_t ri = 0; ri < nperm; ++ri) {
      const auto& rho = tab.perms[ri];
      const int srho = tab.signs[ri];
      for (size_t pi = 0; pi < nperm; ++pi) {
        const auto& prm = tab.perms[pi];
        double prod = static_cast<double>(srho * tab.signs[pi]);
        for (int s = 0; s < q; ++s) {
          prod *= riemann_mixed(combo[rho[2 * s]], combo[rho[2 * s + 1]],
                                combo[prm[2 * s]], combo[prm[2 * s + 1]]);
          if (prod == 0.0) break;
        }
        total += prod;
      }
    }
  } while (next_combination(combo, n));

  return total / static_cast<double>(1 << q);
}

DenseTensor p_tensor(const DenseTensor& riemann_mixed, const DenseTensor& metric_inverse,
                     int q) {
  require(riemann_mixed.rank() == 4, "p_tensor: Riemann must be rank 4");
  require(q >= 1, "p_tensor: q must be >= 1");
  const int n = riemann_mixed.dim();
  if (2 * q >= n) throw std::domain_error("p_tensor: requires 2q < dim");

  const int p = 2 * q;
  const int na = p - 2;  // summed upper indices besides the free pair (i, j)
  const auto& atab = detail::perm_table(na);
  const auto& btab = detail::perm_table(p);

  // W[i][j][e][f]: delta-contraction before attaching g^{ek} g^{fl}
  DenseTensor w(n, 4);
  std::vector<int> upper(p), lower(p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      std::vector<int> pool;
      for (int v = 0; v < n; ++v)
        if (v != i && v != j) pool.push_back(v);
      std::vector<int> combo = na > 0 ? first_combination(na) : std::vector<int>{};
      bool more = true;
      while (more) {
        for (size_t ai = 0; ai < atab.perms.size(); ++ai) {
          const auto& adr = atab.perms[ai];
          for (int t = 0; t < na; ++t) upper[t] = pool[combo[adr[t]]];
          upper[p - 2] = i;
          upper[p - 1] = j;
          for (size_t bi = 0; bi < btab.perms.size(); ++bi) {
            const auto& bdr = btab.perms[bi];
            for (int t = 0; t < p; ++t) lower[t] = upper[bdr[t]];
            double prod = static_cast<double>(btab.signs[bi]);
            for (int s = 0; s < q - 1; ++s) {
              prod *= riemann_mixed(upper[2 * s], upper[2 * s + 1], lower[2 * s],
                                    lower[2 * s + 1]);
              if (prod == 0.0) break;
            }
            if (prod != 0.0) w(i, j, lower[p - 2], lower[p - 1]) += prod;
          }
        }
        more = na > 0 && next_combination(combo, static_cast<int>(pool.size()));
        if (na == 0) more = false;
      }
    }
  }

  // Apply the 1/2^q normalization and attach g^{ek} g^{fl}.
  DenseTensor out(n, 4, Symmetry::riemann4);
  const double scale = 1.0 / static_cast<double>(1 << q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int e = 0; e < n; ++e)
            for (int f = 0; f < n; ++f) {
              const double c = w(i, j, e, f);
              if (c != 0.0) s += c * metric_inverse(e, k) * metric_inverse(f, l);
            }
          out(i, j, k, l) = scale * s;
        }
  validate_symmetry(out);
  return out;
}

DenseTensor lovelock_tensor(const DenseTensor& riemann_mixed, const DenseTensor& metric,
                            int q) {
  require(riemann_mixed.rank() == 4, "lovelock_tensor: Riemann must be rank 4");
  require(metric.rank() == 2, "lovelock_tensor: metric must be rank 2");
  const int n = metric.dim();
  if (q == 0) {
    DenseTensor g0(n, 2, Symmetry::symmetric2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g0(i, j) = -0.5 * metric(i, j);
    return g0;
  }
  require(q > 0, "lovelock_tensor: q must be nonnegative");
  if (2 * q >= n) throw std::domain_error("lovelock_tensor: requires 2q < dim");

  const int p = 2 * q;
  const auto& tab = detail::perm_table(p);

  // gmix[k][j] = delta^{k b1..b2q}_{j a1..a2q} prod_s R_{b..}^{a..}
  //
  // Both index families range over the same (2q+1)-subset.  Relative to the
  // sorted subset, moving the entry at position ku to the front costs
  // (-1)^ku, so delta^{(k, bpool o rho)}_{(j, apool o pi)} =
  // (-1)^{ku+ju} sgn(rho) sgn(pi).
  DenseTensor gmix(n, 2);
  std::vector<int> bseq(p), aseq(p), bpool(p), apool(p);
  std::vector<int> combo = first_combination(p + 1);
  do {
    for (int ku = 0; ku <= p; ++ku) {
      const int k = combo[ku];
      for (int t = 0, w = 0; t <= p; ++t)
        if (t != ku) bpool[w++] = combo[t];
      for (int ju = 0; ju <= p; ++ju) {
        const int j = combo[ju];
        for (int t = 0, w = 0; t <= p; ++t)
          if (t != ju) apool[w++] = combo[t];
        const int base = ((ku + ju) % 2 == 0) ? 1 : -1;
        double acc = 0.0;
        for (size_t ri = 0; ri < tab.perms.size(); ++ri) {
          const auto& rho = tab.perms[ri];
          for (int t = 0; t < p; ++t) bseq[t] = bpool[rho[t]];
          const int srho = tab.signs[ri];
          for (size_t pi = 0; pi < tab.perms.size(); ++pi) {
            const auto& prm = tab.perms[pi];
            for (int t = 0; t < p; ++t) aseq[t] = apool[prm[t]];
            double prod = static_cast<double>(srho * tab.signs[pi]);
            for (int s = 0; s < q; ++s) {
              prod *= riemann_mixed(bseq[2 * s], bseq[2 * s + 1], aseq[2 * s],
                                    aseq[2 * s + 1]);
              if (prod == 0.0) break;
            }
            acc += prod;
          }
        }
        gmix(k, j) += base * acc;
      }
    }
  } while (next_combination(combo, n));

  const double scale = -1.0 / static_cast<double>(1 << (q + 1));
  DenseTensor out(n, 2, Symmetry::symmetric2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += metric(i, k) * gmix(k, j);
      out(i, j) = scale * s;
    }

  validate_symmetry(out);
  // exact symmetrization for downstream consumers
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (out(i, j) + out(j, i));
      out(i, j) = avg;
      out(j, i) = avg;
    }
  return out;
}

}  // namespace gbc
