#pragma once

// Dense complex linear algebra shared by every hierq module.
//
// Kronecker convention: in a ⊗ b the index of `a` is the slow (most
// significant) one, i.e. (a ⊗ b)[i * b.dim() + j] = a[i] * b[j]. Multi-index
// flattening follows the same rule: the first factor is most significant.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hierq {

using Complex = std::complex<double>;

inline constexpr double kDefaultTolerance = 1e-9;

// Largest total dimension any vector or operator may have.
inline constexpr std::size_t kMaxDimension = 4096;

class StateVector {
 public:
  explicit StateVector(std::vector<Complex> amps);

  static StateVector zeros(std::size_t dim);
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Complex> amps() const noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const noexcept;
  bool is_normalized(double tol = kDefaultTolerance) const noexcept;

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::vector<Complex> amps_;
};

StateVector operator+(const StateVector& a, const StateVector& b);
StateVector operator-(const StateVector& a, const StateVector& b);
StateVector operator*(Complex scale, const StateVector& v);

// Square matrix in row-major order.
class Operator {
 public:
  Operator(std::size_t dim, std::vector<Complex> entries);

  static Operator zeros(std::size_t dim);
  static Operator identity(std::size_t dim);
  static Operator diagonal(std::span<const double> values);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const Complex> entries() const noexcept { return entries_; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }

  StateVector column(std::size_t col) const;
  Complex trace() const noexcept;
  Operator adjoint() const;

  // max |A - A^dagger| over all entries.
  double hermiticity_defect() const noexcept;
  bool is_hermitian(double tol = kDefaultTolerance) const noexcept {
    return hermiticity_defect() <= tol;
  }

  friend bool operator==(const Operator&, const Operator&) = default;

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(Complex scale, const Operator& a);

/// Conjugate-linear in `a`: returns sum conj(a_i) * b_i.
Complex inner_product(const StateVector& a, const StateVector& b);

StateVector tensor_product(const StateVector& a, const StateVector& b);
Operator tensor_product(const Operator& a, const Operator& b);

StateVector apply(const Operator& op, const StateVector& v);

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b);
inline double max_abs_diff(const StateVector& a, const StateVector& b) {
  return max_abs_diff(a.amps(), b.amps());
}
inline double max_abs_diff(const Operator& a, const Operator& b) {
  return max_abs_diff(a.entries(), b.entries());
}

struct HermitianEigen {
  std::vector<double> values;  // ascending
  Operator vectors;            // column k belongs to values[k]
};

/// Cyclic complex Jacobi. Throws NotHermitian if the defect exceeds `tol`
/// and NumericFailure if the sweeps do not converge.
HermitianEigen eig_hermitian(const Operator& h, double tol = kDefaultTolerance);

struct MultiIndex {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> idx;
};

std::size_t dimension_product(std::span<const std::size_t> dims);
std::size_t flatten_index(const MultiIndex& m);
MultiIndex unflatten_index(std::size_t n, std::span<const std::size_t> dims);

}  // namespace hierq
