#pragma once

// Dense tensor value type and the antisymmetrized contraction kernels:
// generalized Kronecker deltas, Gauss-Bonnet curvatures L_(q), their
// companion P_(q) tensors, and Lovelock tensors G_(q).
//
// Index conventions.  Tensors are stored with an explicit variance implied
// by the variable name; raising and lowering are explicit operations.  The
// fully covariant Riemann tensor R_ijkl follows the layout in which
//
//     Ric_jl = g^{ik} R_ijkl,      Sc = g^{ik} g^{jl} R_ijkl,
//
// i.e. constant curvature K has R_ijkl = K (g_ik g_jl - g_il g_jk).  The
// mixed tensor R_{ab}^{cd} = g^{ce} g^{df} R_abef is the input to all
// contraction kernels, which makes L_(1) the scalar curvature and G_(1)
// the Einstein tensor.

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace gbc {

enum class Symmetry { none, symmetric2, riemann4 };

class DenseTensor {
 public:
  DenseTensor() = default;
  DenseTensor(int dim, int rank, Symmetry sym = Symmetry::none);
  static DenseTensor from_components(int dim, int rank, std::vector<double> comps,
                                     Symmetry sym = Symmetry::none);

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  Symmetry symmetry() const { return sym_; }
  std::span<const double> components() const { return comps_; }
  std::span<double> components() { return comps_; }

  double& operator()(int i) { return comps_[i]; }
  double operator()(int i) const { return comps_[i]; }
  double& operator()(int i, int j) { return comps_[i * dim_ + j]; }
  double operator()(int i, int j) const { return comps_[i * dim_ + j]; }
  double& operator()(int i, int j, int k) { return comps_[(i * dim_ + j) * dim_ + k]; }
  double operator()(int i, int j, int k) const { return comps_[(i * dim_ + j) * dim_ + k]; }
  double& operator()(int i, int j, int k, int l) {
    return comps_[((i * dim_ + j) * dim_ + k) * dim_ + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return comps_[((i * dim_ + j) * dim_ + k) * dim_ + l];
  }

  double max_abs() const;

 private:
  int dim_ = 0;
  int rank_ = 0;
  Symmetry sym_ = Symmetry::none;
  std::vector<double> comps_;
};

// Largest violation of the declared symmetry, as an absolute value.
double symmetric2_violation(const DenseTensor& t);
double riemann4_violation(const DenseTensor& t);

// Throws std::invalid_argument if the declared symmetry is violated beyond
// rel_tol * max|component|.
void validate_symmetry(const DenseTensor& t, double rel_tol = 1e-9);

struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> xs) : entries(xs) {}
  explicit MultiIndex(std::vector<int> xs) : entries(std::move(xs)) {}
  int size() const { return static_cast<int>(entries.size()); }
};

// Determinant of the p x p matrix with entries delta^{upper_i}_{lower_j}:
// 0 if upper repeats an entry or lower is not a permutation of upper,
// otherwise the sign of the permutation taking upper to lower.
double generalized_delta(const MultiIndex& upper, const MultiIndex& lower);
double generalized_delta(std::span<const int> upper, std::span<const int> lower);

// Explicit raising/lowering of one slot of a rank-4 tensor.
DenseTensor raise_slot(const DenseTensor& t, const DenseTensor& metric_inverse, int slot);
DenseTensor lower_slot(const DenseTensor& t, const DenseTensor& metric, int slot);

// q-th Gauss-Bonnet curvature from the mixed Riemann tensor R_{ab}^{cd}.
// q = 0 returns 1.  Requires 2q < dim.
double gauss_bonnet_curvature(const DenseTensor& riemann_mixed, int q);

// Companion tensor P_(q)^{ijkl}; carries the full Riemann symmetries and
// contracts against R_ijkl to L_(q).  Requires q >= 1 and 2q < dim.
DenseTensor p_tensor(const DenseTensor& riemann_mixed, const DenseTensor& metric_inverse,
                     int q);

// q-th Lovelock tensor G_(q)ij (covariant, symmetric).  q = 0 returns
// -(1/2) g, consistent with the trace identity tr G_(q) = -((n-2q)/2) L_(q).
DenseTensor lovelock_tensor(const DenseTensor& riemann_mixed, const DenseTensor& metric,
                            int q);

namespace detail {
// Signed permutations of {0,..,p-1} in lexicographic order; cached.
struct PermTable {
  std::vector<std::vector<int>> perms;
  std::vector<int> signs;
};
const PermTable& perm_table(int p);

// Sign of the permutation mapping sequence a to sequence b (entries of a
// distinct, b a permutation of a); 0 if they are not permutations of each
// other or contain repeats.
int sequence_perm_sign(std::span<const int> a, std::span<const int> b);
}  // namespace detail

}  // namespace gbc
