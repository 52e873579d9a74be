#pragma once

// Multilevel Haar encoding of 2^(N-1) leaf states.
//
// Each level replaces sibling pairs (u, v) by phi = (u + v)/sqrt2 and
// psi = (u - v)/sqrt2. The phi vectors move one level up; the psi vectors
// stay. Vectors are never renormalized: the transform is an isometry on the
// stacked coefficient space, not per vector.

#include <cstddef>
#include <utility>
#include <vector>

#include "hierq/json_io.hpp"
#include "hierq/linalg.hpp"

namespace hierq {

class LeafLayer {
 public:
  /// Count must be a power of two, all dims equal.
  explicit LeafLayer(std::vector<StateVector> leaves);

  std::span<const StateVector> leaves() const noexcept { return leaves_; }
  std::size_t size() const noexcept { return leaves_.size(); }
  std::size_t local_dim() const noexcept { return leaves_.front().dim(); }
  /// N with size() == 2^(N-1).
  std::size_t level_count() const noexcept;

 private:
  std::vector<StateVector> leaves_;
};

/// Level 0 is the top. details[l] holds the 2^l psi vectors of level l;
/// a single-leaf tree has no details.
struct HaarTree {
  StateVector top;
  std::vector<std::vector<StateVector>> details;

  std::size_t leaf_count() const noexcept { return std::size_t{1} << details.size(); }
  /// top plus every stored psi; equals leaf_count() for a well-formed tree.
  std::size_t independent_count() const noexcept;

  friend bool operator==(const HaarTree&, const HaarTree&) = default;
};

std::pair<StateVector, StateVector> encode_pair(const StateVector& u, const StateVector& v);
std::pair<StateVector, StateVector> decode_pair(const StateVector& phi, const StateVector& psi);

HaarTree encode(const LeafLayer& leaves);

/// Throws MalformedTree unless details[l] has 2^l vectors of the top's dim.
LeafLayer decode(const HaarTree& tree);

/// Replaces every psi whose norm is below `threshold` with zero. Lossy.
HaarTree truncate(const HaarTree& tree, double threshold);

json_io::Json leaves_to_json(const LeafLayer& leaves);
LeafLayer leaves_from_json(const json_io::Json& node, std::string_view path = "");
json_io::Json haar_to_json(const HaarTree& tree);
HaarTree haar_from_json(const json_io::Json& node, std::string_view path = "");

}  // namespace hierq
