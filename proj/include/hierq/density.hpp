#pragma once

// Micro/macro joint states and the density matrices derived from them.
//
// A joint state is sum_j sum_i C^j_i |i> |theta_j> with orthonormal macro
// states |theta_j> and a multi-index i = (i_1..i_k) over the micro factors.
// Coefficients are stored flat with the macro index most significant:
// coeffs[j * D + flatten(i)], D = prod(micro_dims).

#include <cstddef>
#include <span>
#include <vector>

#include "hierq/json_io.hpp"
#include "hierq/linalg.hpp"

namespace hierq {

class JointCoefficients {
 public:
  /// Throws NotNormalized unless sum |C|^2 is within `tol` of 1.
  JointCoefficients(std::size_t macro_dim, std::vector<std::size_t> micro_dims,
                    std::vector<Complex> coeffs, double tol = kDefaultTolerance);

  std::size_t macro_dim() const noexcept { return macro_dim_; }
  std::span<const std::size_t> micro_dims() const noexcept { return micro_dims_; }
  std::size_t micro_dim() const noexcept { return micro_dim_; }
  std::size_t factor_count() const noexcept { return micro_dims_.size(); }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  const Complex& at(std::size_t macro, std::size_t micro_flat) const {
    return coeffs_[macro * micro_dim_ + micro_flat];
  }

  /// The micro-level vector c_j attached to macro state j (not normalized).
  std::span<const Complex> macro_slice(std::size_t macro) const {
    return coeffs().subspan(macro * micro_dim_, micro_dim_);
  }

 private:
  std::size_t macro_dim_;
  std::vector<std::size_t> micro_dims_;
  std::size_t micro_dim_;
  std::vector<Complex> coeffs_;
};

/// Hermitian, unit-trace, positive semidefinite (all within tolerance).
class DensityMatrix {
 public:
  explicit DensityMatrix(Operator rho, double tol = kDefaultTolerance);

  std::size_t dim() const noexcept { return rho_.dim(); }
  const Operator& op() const noexcept { return rho_; }
  double purity() const;

 private:
  Operator rho_;
};

/// Observable whose micro-level block depends on the macro state.
class MacroConditionedOperator {
 public:
  explicit MacroConditionedOperator(std::vector<Operator> blocks);

  std::size_t macro_dim() const noexcept { return blocks_.size(); }
  std::size_t micro_dim() const noexcept { return blocks_.front().dim(); }
  std::span<const Operator> blocks() const noexcept { return blocks_; }

 private:
  std::vector<Operator> blocks_;
};

struct Spectrum {
  std::vector<double> weights;  // descending, negative rounding clamped to 0
  Operator eigenvectors;        // column k belongs to weights[k]
};

/// rho(i, i') = sum_j C^j_i conj(C^j_i'); the row index carries the
/// un-conjugated coefficient.
DensityMatrix build_density(const JointCoefficients& c, double tol = kDefaultTolerance);

/// trace(rho A) for a hermitian micro-level observable.
double expectation(const JointCoefficients& c, const Operator& a, double tol = kDefaultTolerance);

/// Reduced density matrix of micro factor `subsystem` (1-based), averaging
/// over the macro index and every other factor.
DensityMatrix reduce(const JointCoefficients& c, std::size_t subsystem, double tol = kDefaultTolerance);

Spectrum diagonalize(const DensityMatrix& rho, double tol = kDefaultTolerance);

/// sum_j sum_{i,i'} conj(C^j_i) B^j(i, i') C^j_i'.
double macro_expectation(const JointCoefficients& c, const MacroConditionedOperator& b,
                         double tol = kDefaultTolerance);

json_io::Json joint_to_json(const JointCoefficients& c);
JointCoefficients joint_from_json(const json_io::Json& node, std::string_view path = "",
                                  double tol = kDefaultTolerance);

}  // namespace hierq
