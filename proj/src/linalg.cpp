#include "hierq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hierq/error.hpp"

namespace hierq {

namespace {

void check_dimension(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  if (dim > kMaxDimension) {
    throw Error(ErrorCode::TooLarge, "dimension " + std::to_string(dim) + " exceeds cap " +
                                         std::to_string(kMaxDimension));
  }
}

void check_finite(std::span<const Complex> values) {
  for (const auto& z : values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::NonFinite, "non-finite amplitude");
    }
  }
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimensions " + std::to_string(a) + " and " + std::to_string(b) + " differ");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
  check_dimension(amps_.size());
  check_finite(amps_);
}

StateVector StateVector::zeros(std::size_t dim) {
  check_dimension(dim);
  return StateVector(std::vector<Complex>(dim));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  check_dimension(dim);
  if (index >= dim) throw Error(ErrorCode::IndexOutOfRange, "basis index out of range");
  std::vector<Complex> amps(dim);
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

double StateVector::norm() const noexcept {
  double sum = 0.0;
  for (const auto& z : amps_) sum += std::norm(z);
  return std::sqrt(sum);
}

bool StateVector::is_normalized(double tol) const noexcept { return std::abs(norm() - 1.0) <= tol; }

StateVector operator+(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<Complex> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return StateVector(std::move(out));
}

StateVector operator-(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<Complex> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return StateVector(std::move(out));
}

StateVector operator*(Complex scale, const StateVector& v) {
  std::vector<Complex> out(v.amps().begin(), v.amps().end());
  for (auto& z : out) z *= scale;
  return StateVector(std::move(out));
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  check_dimension(dim_);
  if (entries_.size() != dim_ * dim_) {
    throw Error(ErrorCode::DimensionMismatch, "operator of dim " + std::to_string(dim_) +
                                                  " needs " + std::to_string(dim_ * dim_) +
                                                  " entries, got " +
                                                  std::to_string(entries_.size()));
  }
  check_finite(entries_);
}

Operator Operator::zeros(std::size_t dim) {
  check_dimension(dim);
  return Operator(dim, std::vector<Complex>(dim * dim));
}

Operator Operator::identity(std::size_t dim) {
  check_dimension(dim);
  std::vector<Complex> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
  return Operator(dim, std::move(e));
}

Operator Operator::diagonal(std::span<const double> values) {
  const std::size_t n = values.size();
  check_dimension(n);
  std::vector<Complex> e(n * n);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = values[i];
  return Operator(n, std::move(e));
}

StateVector Operator::column(std::size_t col) const {
  if (col >= dim_) throw Error(ErrorCode::IndexOutOfRange, "column out of range");
  std::vector<Complex> out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) out[r] = (*this)(r, col);
  return StateVector(std::move(out));
}

Complex Operator::trace() const noexcept {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

Operator Operator::adjoint() const {
  std::vector<Complex> out(entries_.size());
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) out[c * dim_ + r] = std::conj((*this)(r, c));
  }
  return Operator(dim_, std::move(out));
}

double Operator::hermiticity_defect() const noexcept {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = r; c < dim_; ++c) {
      worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    }
  }
  return worst;
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<Complex> out(a.entries().begin(), a.entries().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.entries()[i];
  return Operator(a.dim(), std::move(out));
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<Complex> out(a.entries().begin(), a.entries().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.entries()[i];
  return Operator(a.dim(), std::move(out));
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a.dim(), b.dim());
  const std::size_t n = a.dim();
  std::vector<Complex> out(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) out[r * n + c] += ark * b(k, c);
    }
  }
  return Operator(n, std::move(out));
}

Operator operator*(Complex scale, const Operator& a) {
  std::vector<Complex> out(a.entries().begin(), a.entries().end());
  for (auto& z : out) z *= scale;
  return Operator(a.dim(), std::move(out));
}

// ---------------------------------------------------------------------------
// Free operations

Complex inner_product(const StateVector& a, const StateVector& b) {
  require_same_dim(a.dim(), b.dim());
  Complex sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  check_dimension(a.dim() * b.dim());
  std::vector<Complex> out;
  out.reserve(a.dim() * b.dim());
  for (const auto& x : a.amps()) {
    for (const auto& y : b.amps()) out.push_back(x * y);
  }
  return StateVector(std::move(out));
}

Operator tensor_product(const Operator& a, const Operator& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  const std::size_t n = na * nb;
  check_dimension(n);
  std::vector<Complex> out(n * n);
  for (std::size_t ra = 0; ra < na; ++ra) {
    for (std::size_t ca = 0; ca < na; ++ca) {
      const Complex x = a(ra, ca);
      for (std::size_t rb = 0; rb < nb; ++rb) {
        for (std::size_t cb = 0; cb < nb; ++cb) {
          out[(ra * nb + rb) * n + (ca * nb + cb)] = x * b(rb, cb);
        }
      }
    }
  }
  return Operator(n, std::move(out));
}

StateVector apply(const Operator& op, const StateVector& v) {
  require_same_dim(op.dim(), v.dim());
  const std::size_t n = op.dim();
  std::vector<Complex> out(n);
  for (std::size_t r = 0; r < n; ++r) {
    Complex sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) sum += op(r, c) * v[c];
    out[r] = sum;
  }
  return StateVector(std::move(out));
}

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  require_same_dim(a.size(), b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

HermitianEigen eig_hermitian(const Operator& h, double tol) {
  if (const double defect = h.hermiticity_defect(); defect > tol) {
    throw Error(ErrorCode::NotHermitian,
                "hermiticity defect " + std::to_string(defect) + " exceeds tolerance");
  }
  const std::size_t n = h.dim();

  // Work on the exactly hermitian part so that rounding in the input does
  // not leak into the rotations.
  std::vector<Complex> a(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    a[r * n + r] = h(r, r).real();
    for (std::size_t c = r + 1; c < n; ++c) {
      const Complex upper = 0.5 * (h(r, c) + std::conj(h(c, r)));
      a[r * n + c] = upper;
      a[c * n + r] = std::conj(upper);
    }
  }
  std::vector<Complex> v(n * n);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto at = [&](std::size_t r, std::size_t c) -> Complex& { return a[r * n + c]; };

  double total = 0.0;
  for (const auto& z : a) total += std::norm(z);
  if (!std::isfinite(total)) throw Error(ErrorCode::NumericFailure, "matrix norm overflows double range");
  // Off-diagonal mass at rounding level for this size counts as converged.
  const double eps = 4.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  const double floor = eps * eps * std::max(total, std::numeric_limits<double>::min());

  constexpr int kMaxSweeps = 100;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(at(p, q));
    }
    if (off <= floor) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = at(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = at(p, p).real();
        const double aqq = at(q, q).real();

        // Phase rotation makes the (p, q) entry real, then a real Jacobi
        // rotation annihilates it.
        const Complex phase = apq / mag;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * mag);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // G = [[c, s], [-s conj(phase), c conj(phase)]] on the (p, q) plane.
        const Complex g00 = c;
        const Complex g01 = s;
        const Complex g10 = -s * std::conj(phase);
        const Complex g11 = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = at(k, p);
          const Complex akq = at(k, q);
          at(k, p) = akp * g00 + akq * g10;
          at(k, q) = akp * g01 + akq * g11;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = at(p, k);
          const Complex aqk = at(q, k);
          at(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
          at(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v[k * n + p];
          const Complex vkq = v[k * n + q];
          v[k * n + p] = vkp * g00 + vkq * g10;
          v[k * n + q] = vkp * g01 + vkq * g11;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        at(p, p) = at(p, p).real();
        at(q, q) = at(q, q).real();
      }
    }
  }
  if (!converged) throw Error(ErrorCode::NumericFailure, "Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return at(x, x).real() < at(y, y).real();
  });

  HermitianEigen result{std::vector<double>(n), Operator::zeros(n)};
  std::vector<Complex> vectors(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    result.values[k] = at(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) vectors[r * n + k] = v[r * n + order[k]];
  }
  result.vectors = Operator(n, std::move(vectors));
  return result;
}

std::size_t dimension_product(std::span<const std::size_t> dims) {
  std::size_t total = 1;
  for (const auto d : dims) {
    if (d == 0) throw Error(ErrorCode::InvalidArgument, "factor dimension must be positive");
    if (total > std::numeric_limits<std::size_t>::max() / d) {
      throw Error(ErrorCode::TooLarge, "dimension product overflows");
    }
    total *= d;
  }
  return total;
}

std::size_t flatten_index(const MultiIndex& m) {
  if (m.dims.size() != m.idx.size()) {
    throw Error(ErrorCode::DimensionMismatch, "multi-index rank differs from dims rank");
  }
  dimension_product(m.dims);
  std::size_t flat = 0;
  for (std::size_t s = 0; s < m.dims.size(); ++s) {
    if (m.idx[s] >= m.dims[s]) {
      throw Error(ErrorCode::IndexOutOfRange, "component " + std::to_string(s) + " = " +
                                                  std::to_string(m.idx[s]) + " not below " +
                                                  std::to_string(m.dims[s]));
    }
    flat = flat * m.dims[s] + m.idx[s];
  }
  return flat;
}

MultiIndex unflatten_index(std::size_t n, std::span<const std::size_t> dims) {
  const std::size_t total = dimension_product(dims);
  if (n >= total) {
    throw Error(ErrorCode::IndexOutOfRange,
                "flat index " + std::to_string(n) + " not below " + std::to_string(total));
  }
  MultiIndex m{std::vector<std::size_t>(dims.begin(), dims.end()),
               std::vector<std::size_t>(dims.size())};
  for (std::size_t s = dims.size(); s-- > 0;) {
    m.idx[s] = n % dims[s];
    n /= dims[s];
  }
  return m;
}

}  // namespace hierq
