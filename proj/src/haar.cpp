#include "hierq/haar.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "hierq/error.hpp"

namespace hierq {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
constexpr std::size_t kMaxLevels = 24;

}  // namespace

LeafLayer::LeafLayer(std::vector<StateVector> leaves) : leaves_(std::move(leaves)) {
  if (leaves_.empty() || !std::has_single_bit(leaves_.size())) {
    throw Error(ErrorCode::InvalidArgument,
                "leaf count " + std::to_string(leaves_.size()) + " is not a power of two");
  }
  for (const auto& leaf : leaves_) {
    if (leaf.dim() != leaves_.front().dim()) {
      throw Error(ErrorCode::DimensionMismatch, "leaves differ in local dimension");
    }
  }
}

std::size_t LeafLayer::level_count() const noexcept {
  return static_cast<std::size_t>(std::countr_zero(leaves_.size())) + 1;
}

std::size_t HaarTree::independent_count() const noexcept {
  std::size_t count = 1;
  for (const auto& level : details) count += level.size();
  return count;
}

std::pair<StateVector, StateVector> encode_pair(const StateVector& u, const StateVector& v) {
  if (u.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "pair members differ in dimension");
  std::vector<Complex> phi(u.dim());
  std::vector<Complex> psi(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) {
    phi[i] = (u[i] + v[i]) * kInvSqrt2;
    psi[i] = (u[i] - v[i]) * kInvSqrt2;
  }
  return {StateVector(std::move(phi)), StateVector(std::move(psi))};
}

std::pair<StateVector, StateVector> decode_pair(const StateVector& phi, const StateVector& psi) {
  // The Haar butterfly is its own inverse.
  return encode_pair(phi, psi);
}

HaarTree encode(const LeafLayer& leaves) {
  std::vector<StateVector> current(leaves.leaves().begin(), leaves.leaves().end());
  // Built bottom-up, stored top-down.
  std::vector<std::vector<StateVector>> bottom_up;
  while (current.size() > 1) {
    std::vector<StateVector> phis;
    std::vector<StateVector> psis;
    phis.reserve(current.size() / 2);
    psis.reserve(current.size() / 2);
    for (std::size_t i = 0; i < current.size(); i += 2) {
      auto [phi, psi] = encode_pair(current[i], current[i + 1]);
      phis.push_back(std::move(phi));
      psis.push_back(std::move(psi));
    }
    bottom_up.push_back(std::move(psis));
    current = std::move(phis);
  }
  return HaarTree{std::move(current.front()), {bottom_up.rbegin(), bottom_up.rend()}};
}

LeafLayer decode(const HaarTree& tree) {
  const std::size_t dim = tree.top.dim();
  for (std::size_t l = 0; l < tree.details.size(); ++l) {
    if (l >= kMaxLevels || tree.details[l].size() != (std::size_t{1} << l)) {
      throw Error(ErrorCode::MalformedTree, "level " + std::to_string(l) + " has " +
                                                 std::to_string(tree.details[l].size()) +
                                                 " detail vectors, expected 2^" + std::to_string(l));
    }
    for (const auto& psi : tree.details[l]) {
      if (psi.dim() != dim) throw Error(ErrorCode::MalformedTree, "detail vector dimension differs from top");
    }
  }
  std::vector<StateVector> current{tree.top};
  for (const auto& level : tree.details) {
    std::vector<StateVector> next;
    next.reserve(current.size() * 2);
    for (std::size_t i = 0; i < current.size(); ++i) {
      auto [u, v] = decode_pair(current[i], level[i]);
      next.push_back(std::move(u));
      next.push_back(std::move(v));
    }
    current = std::move(next);
  }
  return LeafLayer(std::move(current));
}

HaarTree truncate(const HaarTree& tree, double threshold) {
  HaarTree out = tree;
  for (auto& level : out.details) {
    for (auto& psi : level) {
      if (psi.norm() < threshold) psi = StateVector::zeros(psi.dim());
    }
  }
  return out;
}

json_io::Json leaves_to_json(const LeafLayer& leaves) {
  json_io::Json list = json_io::Json::array();
  for (const auto& leaf : leaves.leaves()) list.push_back(json_io::encode_state(leaf));
  json_io::Json out = json_io::Json::object();
  out["leaves"] = std::move(list);
  return out;
}

LeafLayer leaves_from_json(const json_io::Json& node, std::string_view path) {
  json_io::ObjectReader reader(node, std::string(path));
  const auto list_path = reader.child_path("leaves");
  const auto& list = json_io::read_array(reader.required("leaves"), list_path);
  reader.finish();
  std::vector<StateVector> leaves;
  leaves.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i) {
    leaves.push_back(json_io::decode_state(list[i], list_path + "/" + std::to_string(i)));
  }
  return LeafLayer(std::move(leaves));
}

json_io::Json haar_to_json(const HaarTree& tree) {
  json_io::Json out = json_io::Json::object();
  out["top"] = json_io::encode_state(tree.top);
  json_io::Json details = json_io::Json::array();
  for (const auto& level : tree.details) {
    json_io::Json row = json_io::Json::array();
    for (const auto& psi : level) row.push_back(json_io::encode_state(psi));
    details.push_back(std::move(row));
  }
  out["details"] = std::move(details);
  return out;
}

HaarTree haar_from_json(const json_io::Json& node, std::string_view path) {
  json_io::ObjectReader reader(node, std::string(path));
  auto top = json_io::decode_state(reader.required("top"), reader.child_path("top"));
  const auto details_path = reader.child_path("details");
  const auto& details_node = json_io::read_array(reader.required("details"), details_path);
  reader.finish();
  std::vector<std::vector<StateVector>> details;
  for (std::size_t l = 0; l < details_node.size(); ++l) {
    const auto level_path = details_path + "/" + std::to_string(l);
    const auto& level_node = json_io::read_array(details_node[l], level_path);
    std::vector<StateVector> level;
    for (std::size_t i = 0; i < level_node.size(); ++i) {
      level.push_back(json_io::decode_state(level_node[i], level_path + "/" + std::to_string(i)));
    }
    details.push_back(std::move(level));
  }
  return HaarTree{std::move(top), std::move(details)};
}

}  // namespace hierq
