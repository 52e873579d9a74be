#pragma once

// Random generators and brute-force oracles for the test suites. The
// oracles deliberately avoid the library's own index helpers and kernels.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "hierq/density.hpp"
#include "hierq/error.hpp"
#include "hierq/haar.hpp"
#include "hierq/hier_state.hpp"
#include "hierq/linalg.hpp"
#include "hierq/repgroup.hpp"

namespace hierq::test {

using Rng = std::mt19937_64;

/// Code of the hierq::Error thrown by `fn`, or nullopt if it returned.
template <typename Fn>
std::optional<ErrorCode> code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline Complex random_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

inline std::vector<Complex> random_amps(Rng& rng, std::size_t n) {
  std::vector<Complex> out(n);
  for (auto& z : out) z = random_complex(rng);
  return out;
}

inline StateVector random_state(Rng& rng, std::size_t n) { return StateVector(random_amps(rng, n)); }

inline StateVector random_unit_state(Rng& rng, std::size_t n) {
  auto amps = random_amps(rng, n);
  double norm2 = 0.0;
  for (const auto& z : amps) norm2 += std::norm(z);
  for (auto& z : amps) z /= std::sqrt(norm2);
  return StateVector(std::move(amps));
}

inline Operator random_operator(Rng& rng, std::size_t n) { return Operator(n, random_amps(rng, n * n)); }

inline Operator random_hermitian(Rng& rng, std::size_t n) {
  auto a = random_amps(rng, n * n);
  std::vector<Complex> h(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) h[r * n + c] = 0.5 * (a[r * n + c] + std::conj(a[c * n + r]));
  }
  return Operator(n, std::move(h));
}

inline JointCoefficients random_joint(Rng& rng, std::size_t macro, std::vector<std::size_t> dims) {
  std::size_t d = 1;
  for (auto x : dims) d *= x;
  auto amps = random_amps(rng, macro * d);
  double norm2 = 0.0;
  for (const auto& z : amps) norm2 += std::norm(z);
  for (auto& z : amps) z /= std::sqrt(norm2);
  return JointCoefficients(macro, std::move(dims), std::move(amps));
}

/// Random shape with M <= max_macro, k <= max_k, d_s <= max_d.
inline JointCoefficients random_joint_shape(Rng& rng, std::size_t max_macro, std::size_t max_k,
                                            std::size_t max_d) {
  std::uniform_int_distribution<std::size_t> m(1, max_macro);
  std::uniform_int_distribution<std::size_t> k(1, max_k);
  std::uniform_int_distribution<std::size_t> d(1, max_d);
  std::vector<std::size_t> dims(k(rng));
  for (auto& x : dims) x = d(rng);
  return random_joint(rng, m(rng), std::move(dims));
}

// ---------------------------------------------------------------------------
// Oracles

/// Multiplicities by counting total weights over the full product basis:
/// mult(J) = N(M = J) - N(M = J + 1), weights in units of 1/2.
inline RepMultiset weight_count_oracle(const std::vector<int>& two_js) {
  std::map<int, std::int64_t> counts{{0, 1}};
  for (const int tj : two_js) {
    std::map<int, std::int64_t> next;
    for (const auto& [m, n] : counts) {
      for (int w = -tj; w <= tj; w += 2) next[m + w] += n;
    }
    counts = std::move(next);
  }
  RepMultiset out;
  for (const auto& [m, n] : counts) {
    if (m < 0) continue;
    const auto above = counts.count(m + 2) ? counts.at(m + 2) : 0;
    if (n - above > 0) out[m] = static_cast<std::uint64_t>(n - above);
  }
  return out;
}

/// Literal enumeration of every basis tuple (exponential, for small inputs).
inline RepMultiset weight_enumeration_oracle(const std::vector<int>& two_js) {
  std::map<int, std::int64_t> counts;
  std::vector<int> m(two_js.size());
  for (std::size_t s = 0; s < m.size(); ++s) m[s] = -two_js[s];
  while (true) {
    int total = 0;
    for (int x : m) total += x;
    ++counts[total];
    std::size_t s = 0;
    while (s < m.size() && m[s] == two_js[s]) {
      m[s] = -two_js[s];
      ++s;
    }
    if (s == m.size()) break;
    m[s] += 2;
  }
  RepMultiset out;
  for (const auto& [mm, n] : counts) {
    if (mm < 0) continue;
    const auto above = counts.count(mm + 2) ? counts.at(mm + 2) : 0;
    if (n - above > 0) out[mm] = static_cast<std::uint64_t>(n - above);
  }
  return out;
}

using Matrix = std::vector<std::vector<Complex>>;

inline std::vector<std::size_t> digits_of(std::size_t n, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> out(dims.size());
  for (std::size_t s = dims.size(); s-- > 0;) {
    out[s] = n % dims[s];
    n /= dims[s];
  }
  return out;
}

/// sum_j |c_j><c_j| built entry by entry.
inline Matrix outer_product_density(const JointCoefficients& c) {
  const std::size_t d = c.micro_dim();
  Matrix rho(d, std::vector<Complex>(d));
  for (std::size_t j = 0; j < c.macro_dim(); ++j) {
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t col = 0; col < d; ++col) rho[r][col] += c.coeffs()[j * d + r] * std::conj(c.coeffs()[j * d + col]);
    }
  }
  return rho;
}

/// Partial trace of a full micro density matrix over every factor except
/// `keep` (0-based), by comparing digit tuples.
inline Matrix naive_partial_trace(const Matrix& rho, const std::vector<std::size_t>& dims, std::size_t keep) {
  const std::size_t ds = dims[keep];
  Matrix out(ds, std::vector<Complex>(ds));
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const auto di = digits_of(i, dims);
    for (std::size_t ip = 0; ip < rho.size(); ++ip) {
      const auto dip = digits_of(ip, dims);
      bool others_equal = true;
      for (std::size_t t = 0; t < dims.size(); ++t) {
        if (t != keep && di[t] != dip[t]) others_equal = false;
      }
      if (others_equal) out[di[keep]][dip[keep]] += rho[i][ip];
    }
  }
  return out;
}

/// <psi|(A ⊗ I_macro)|psi> on the flattened joint vector with the micro
/// index most significant: psi[i * M + j] = C^j_i.
inline Complex full_state_expectation(const JointCoefficients& c, const Operator& a) {
  const std::size_t d = c.micro_dim();
  const std::size_t m = c.macro_dim();
  const std::size_t n = d * m;
  std::vector<Complex> psi(n);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < m; ++j) psi[i * m + j] = c.coeffs()[j * d + i];
  }
  Complex sum = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t col = 0; col < n; ++col) {
      const std::size_t ir = r / m, jr = r % m, ic = col / m, jc = col % m;
      const Complex big = (jr == jc) ? a(ir, ic) : Complex{};
      sum += std::conj(psi[r]) * big * psi[col];
    }
  }
  return sum;
}

inline Complex triple_loop_macro(const JointCoefficients& c, const std::vector<Operator>& blocks) {
  const std::size_t d = c.micro_dim();
  Complex sum = 0.0;
  for (std::size_t j = 0; j < c.macro_dim(); ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t ip = 0; ip < d; ++ip) {
        sum += std::conj(c.coeffs()[j * d + i]) * blocks[j](i, ip) * c.coeffs()[j * d + ip];
      }
    }
  }
  return sum;
}

inline double max_diff(const Matrix& a, const Operator& b) {
  double worst = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < a.size(); ++c) worst = std::max(worst, std::abs(a[r][c] - b(r, c)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Trees

inline HierNode leaf(std::string label, int level, int two_j, std::optional<StateVector> state = std::nullopt) {
  return HierNode{std::move(label), level, IrrepLabel{two_j}, std::move(state), {}};
}

inline HierNode node(std::string label, int level, int two_j, std::vector<HierNode> children,
                     std::optional<StateVector> state = std::nullopt) {
  return HierNode{std::move(label), level, IrrepLabel{two_j}, std::move(state), std::move(children)};
}

/// Three-level organism: cells of `cell_two_j` each built from `components`.
inline HierNode organism_tree(int root_two_j, std::size_t cells, int cell_two_j, const std::vector<int>& components) {
  std::vector<HierNode> cell_nodes;
  for (std::size_t i = 0; i < cells; ++i) {
    std::vector<HierNode> comps;
    for (std::size_t c = 0; c < components.size(); ++c) {
      comps.push_back(leaf("c" + std::to_string(c), 2, components[c]));
    }
    cell_nodes.push_back(node("cell" + std::to_string(i), 1, cell_two_j, std::move(comps)));
  }
  return node("organism", 0, root_two_j, std::move(cell_nodes));
}

inline HierNode random_tree(Rng& rng, int level, int max_depth, const std::string& label) {
  std::uniform_int_distribution<int> rep(0, 4);
  std::uniform_int_distribution<int> kids(0, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  HierNode n{label, level, IrrepLabel{rep(rng)}, std::nullopt, {}};
  if (coin(rng)) n.state = random_state(rng, dim(rng));
  if (level + 1 < max_depth) {
    const int count = kids(rng);
    for (int i = 0; i < count; ++i) {
      n.children.push_back(random_tree(rng, level + 1, max_depth, label + "_" + std::to_string(i)));
    }
  }
  return n;
}

}  // namespace hierq::test
