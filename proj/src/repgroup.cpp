#include "hierq/repgroup.hpp"

#include <cstdlib>
#include <string>

#include "hierq/error.hpp"

namespace hierq {

namespace {

void check_label(IrrepLabel r) {
  if (r.two_j < 0) {
    throw Error(ErrorCode::InvalidArgument, "two_j must be non-negative, got " + std::to_string(r.two_j));
  }
}

}  // namespace

RepMultiset couple_pair(IrrepLabel a, IrrepLabel b) {
  check_label(a);
  check_label(b);
  RepMultiset out;
  for (int j = std::abs(a.two_j - b.two_j); j <= a.two_j + b.two_j; j += 2) out[j] = 1;
  return out;
}

RepMultiset decompose_product(std::span<const IrrepLabel> reps) {
  RepMultiset acc{{0, 1}};
  for (const auto& next : reps) {
    check_label(next);
    RepMultiset folded;
    for (const auto& [two_j, mult] : acc) {
      for (const auto& [coupled, m] : couple_pair(IrrepLabel{two_j}, next)) {
        folded[coupled] += mult * m;
      }
    }
    acc = std::move(folded);
  }
  return acc;
}

std::uint64_t contains(std::span<const IrrepLabel> reps, IrrepLabel target) {
  check_label(target);
  const auto product = decompose_product(reps);
  const auto it = product.find(target.two_j);
  return it == product.end() ? 0 : it->second;
}

std::uint64_t total_dimension(const RepMultiset& reps) {
  std::uint64_t dim = 0;
  for (const auto& [two_j, mult] : reps) dim += mult * static_cast<std::uint64_t>(two_j + 1);
  return dim;
}

std::vector<IrrepLabel> to_irreps(std::span<const int> two_js) {
  std::vector<IrrepLabel> out;
  out.reserve(two_js.size());
  for (const int j : two_js) {
    check_label(IrrepLabel{j});
    out.push_back(IrrepLabel{j});
  }
  return out;
}

}  // namespace hierq
