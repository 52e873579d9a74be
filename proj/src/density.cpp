#include "hierq/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hierq/error.hpp"

namespace hierq {

namespace {

void require_hermitian(const Operator& a, double tol, std::string_view what) {
  if (const double defect = a.hermiticity_defect(); defect > tol) {
    throw Error(ErrorCode::NotHermitian,
                std::string(what) + " hermiticity defect " + std::to_string(defect) + " exceeds tolerance");
  }
}

}  // namespace

JointCoefficients::JointCoefficients(std::size_t macro_dim, std::vector<std::size_t> micro_dims,
                                     std::vector<Complex> coeffs, double tol)
    : macro_dim_(macro_dim), micro_dims_(std::move(micro_dims)), micro_dim_(0), coeffs_(std::move(coeffs)) {
  if (macro_dim_ == 0) throw Error(ErrorCode::InvalidArgument, "macro_dim must be positive");
  if (micro_dims_.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one micro factor");
  micro_dim_ = dimension_product(micro_dims_);
  if (micro_dim_ > kMaxDimension || macro_dim_ > kMaxDimension / micro_dim_) {
    throw Error(ErrorCode::TooLarge, "joint dimension exceeds cap " + std::to_string(kMaxDimension));
  }
  if (coeffs_.size() != macro_dim_ * micro_dim_) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(macro_dim_ * micro_dim_) +
                                                  " coefficients, got " + std::to_string(coeffs_.size()));
  }
  double norm2 = 0.0;
  for (const auto& z : coeffs_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::NonFinite, "non-finite coefficient");
    }
    norm2 += std::norm(z);
  }
  if (std::abs(norm2 - 1.0) > tol) {
    throw Error(ErrorCode::NotNormalized, "sum |C|^2 = " + std::to_string(norm2));
  }
}

DensityMatrix::DensityMatrix(Operator rho, double tol) : rho_(std::move(rho)) {
  require_hermitian(rho_, tol, "density matrix");
  const Complex tr = rho_.trace();
  if (std::abs(tr - 1.0) > tol) {
    throw Error(ErrorCode::NotNormalized, "density matrix trace " + std::to_string(tr.real()));
  }
  const auto eig = eig_hermitian(rho_, tol);
  if (eig.values.front() < -tol) {
    throw Error(ErrorCode::NotPositive, "density matrix eigenvalue " + std::to_string(eig.values.front()));
  }
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

MacroConditionedOperator::MacroConditionedOperator(std::vector<Operator> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one macro block");
  for (const auto& b : blocks_) {
    if (b.dim() != blocks_.front().dim()) {
      throw Error(ErrorCode::DimensionMismatch, "macro blocks differ in dimension");
    }
  }
}

DensityMatrix build_density(const JointCoefficients& c, double tol) {
  const std::size_t d = c.micro_dim();
  std::vector<Complex> rho(d * d);
  for (std::size_t j = 0; j < c.macro_dim(); ++j) {
    const auto slice = c.macro_slice(j);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t col = r; col < d; ++col) rho[r * d + col] += slice[r] * std::conj(slice[col]);
    }
  }
  // Fill the lower triangle from the upper one so hermiticity is exact.
  for (std::size_t r = 0; r < d; ++r) {
    rho[r * d + r] = rho[r * d + r].real();
    for (std::size_t col = r + 1; col < d; ++col) rho[col * d + r] = std::conj(rho[r * d + col]);
  }
  return DensityMatrix(Operator(d, std::move(rho)), tol);
}

double expectation(const JointCoefficients& c, const Operator& a, double tol) {
  if (a.dim() != c.micro_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "observable dim " + std::to_string(a.dim()) +
                                                  " vs micro dim " + std::to_string(c.micro_dim()));
  }
  require_hermitian(a, tol, "observable");
  const auto rho = build_density(c, tol);
  return (rho.op() * a).trace().real();
}

DensityMatrix reduce(const JointCoefficients& c, std::size_t subsystem, double tol) {
  if (subsystem < 1 || subsystem > c.factor_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "subsystem " + std::to_string(subsystem) + " not in [1, " +
                                                std::to_string(c.factor_count()) + "]");
  }
  const auto dims = c.micro_dims();
  const std::size_t s = subsystem - 1;
  const std::size_t ds = dims[s];
  // flat = outer * (ds * inner) + a * inner + low
  const std::size_t inner = dimension_product(dims.subspan(s + 1));
  const std::size_t outer = dimension_product(dims.first(s));

  std::vector<Complex> rho(ds * ds);
  for (std::size_t j = 0; j < c.macro_dim(); ++j) {
    const auto slice = c.macro_slice(j);
    for (std::size_t hi = 0; hi < outer; ++hi) {
      for (std::size_t lo = 0; lo < inner; ++lo) {
        const std::size_t base = hi * ds * inner + lo;
        for (std::size_t a = 0; a < ds; ++a) {
          const Complex ca = slice[base + a * inner];
          for (std::size_t b = 0; b < ds; ++b) {
            rho[a * ds + b] += ca * std::conj(slice[base + b * inner]);
          }
        }
      }
    }
  }
  return DensityMatrix(Operator(ds, std::move(rho)), tol);
}

Spectrum diagonalize(const DensityMatrix& rho, double tol) {
  auto eig = eig_hermitian(rho.op(), tol);
  const std::size_t n = rho.dim();
  std::vector<Complex> vectors(n * n);
  Spectrum out{std::vector<double>(n), Operator::zeros(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = n - 1 - k;
    double w = eig.values[src];
    if (w < -tol) throw Error(ErrorCode::NotPositive, "negative weight " + std::to_string(w));
    out.weights[k] = std::max(w, 0.0);
    for (std::size_t r = 0; r < n; ++r) vectors[r * n + k] = eig.vectors(r, src);
  }
  out.eigenvectors = Operator(n, std::move(vectors));
  return out;
}

double macro_expectation(const JointCoefficients& c, const MacroConditionedOperator& b, double tol) {
  if (b.macro_dim() != c.macro_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "operator has " + std::to_string(b.macro_dim()) +
                                                  " macro blocks, state has macro dim " +
                                                  std::to_string(c.macro_dim()));
  }
  if (b.micro_dim() != c.micro_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "block dim " + std::to_string(b.micro_dim()) +
                                                  " vs micro dim " + std::to_string(c.micro_dim()));
  }
  for (const auto& block : b.blocks()) require_hermitian(block, tol, "macro block");

  Complex sum = 0.0;
  for (std::size_t j = 0; j < c.macro_dim(); ++j) {
    const auto slice = c.macro_slice(j);
    const StateVector v(std::vector<Complex>(slice.begin(), slice.end()));
    sum += inner_product(v, apply(b.blocks()[j], v));
  }
  return sum.real();
}

json_io::Json joint_to_json(const JointCoefficients& c) {
  json_io::Json out = json_io::Json::object();
  out["macro_dim"] = c.macro_dim();
  out["micro_dims"] = json_io::Json(std::vector<std::size_t>(c.micro_dims().begin(), c.micro_dims().end()));
  out["coeffs"] = json_io::encode_amplitudes(c.coeffs());
  return out;
}

JointCoefficients joint_from_json(const json_io::Json& node, std::string_view path, double tol) {
  json_io::ObjectReader reader(node, std::string(path));
  auto read_dim = [](const json_io::Json& n, const std::string& p) {
    const auto v = json_io::read_int(n, p);
    if (v < 1 || static_cast<std::size_t>(v) > kMaxDimension) json_io::schema_fail(p, "dimension out of range");
    return static_cast<std::size_t>(v);
  };
  const auto macro_dim = read_dim(reader.required("macro_dim"), reader.child_path("macro_dim"));
  const auto dims_path = reader.child_path("micro_dims");
  const auto& dims_node = json_io::read_array(reader.required("micro_dims"), dims_path);
  std::vector<std::size_t> micro_dims;
  for (std::size_t i = 0; i < dims_node.size(); ++i) {
    micro_dims.push_back(read_dim(dims_node[i], dims_path + "/" + std::to_string(i)));
  }
  auto coeffs = json_io::decode_amplitudes(reader.required("coeffs"), reader.child_path("coeffs"));
  reader.finish();
  return JointCoefficients(macro_dim, std::move(micro_dims), std::move(coeffs), tol);
}

}  // namespace hierq
