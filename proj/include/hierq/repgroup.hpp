#pragma once

// SU(2) irrep arithmetic. Irreps are labeled by two_j (dimension two_j + 1)
// so that half-integer spins stay in integer arithmetic.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace hierq {

struct IrrepLabel {
  int two_j = 0;

  int dimension() const noexcept { return two_j + 1; }
  friend auto operator<=>(const IrrepLabel&, const IrrepLabel&) = default;
};

/// two_j -> multiplicity; only positive multiplicities are stored.
using RepMultiset = std::map<int, std::uint64_t>;

/// Clebsch-Gordan series: |a-b|, |a-b|+2, ..., a+b, each once.
RepMultiset couple_pair(IrrepLabel a, IrrepLabel b);

/// Left fold of couple_pair over `reps`; the empty product is {0: 1}.
RepMultiset decompose_product(std::span<const IrrepLabel> reps);

/// Multiplicity of `target` in the product; 0 means the product cannot
/// carry that irrep.
std::uint64_t contains(std::span<const IrrepLabel> reps, IrrepLabel target);

/// Sum of mult * (two_j + 1).
std::uint64_t total_dimension(const RepMultiset& reps);

std::vector<IrrepLabel> to_irreps(std::span<const int> two_js);

}  // namespace hierq
