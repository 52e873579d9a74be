#pragma once

// Hierarchical wave functions: a tree of wave-function slots, one per entity
// per level. The slot of a whole is independent information and is never
// derived from the slots of its parts.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hierq/json_io.hpp"
#include "hierq/linalg.hpp"
#include "hierq/repgroup.hpp"

namespace hierq {

struct HierNode {
  std::string label;
  int level = 0;
  IrrepLabel rep;
  std::optional<StateVector> state;
  std::vector<HierNode> children;

  friend bool operator==(const HierNode&, const HierNode&) = default;
};

/// Skeleton of a tree with amplitudes erased. Slot occupancy and slot
/// dimension are part of the shape: a tree carrying a state on its root
/// lives in a different space from one that does not.
struct TreeShape {
  std::string label;
  int level = 0;
  int two_j = 0;
  std::size_t slot_dim = 0;  // 0 = empty slot
  std::vector<TreeShape> children;

  friend bool operator==(const TreeShape&, const TreeShape&) = default;
};

TreeShape shape_of(const HierNode& root);

enum class ViolationKind {
  NegativeLevel,
  NegativeRep,
  EmptyLabel,
  LevelStep,
  DuplicateLabel,
  Inconsistent,
};

std::string_view violation_kind_name(ViolationKind kind) noexcept;

struct Violation {
  std::string path;  // labels from the root joined by '/'
  ViolationKind kind;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const noexcept { return violations.empty(); }
};

/// With `check_consistency`, each inner node's rep must occur in the
/// decomposition of its children's reps.
ValidationReport validate(const HierNode& root, bool check_consistency);

/// Re-parents `parts` under a new node one level up. The new node's slot
/// is left empty.
HierNode bind(std::vector<HierNode> parts, std::string new_label, IrrepLabel new_rep);

/// Sum of slot-wise inner products. Throws ShapeMismatch when the trees do
/// not share a TreeShape.
Complex hier_inner_product(const HierNode& a, const HierNode& b);

/// sqrt of the summed squared slot distances; same shape gate.
double hier_distance(const HierNode& a, const HierNode& b);

std::size_t depth(const HierNode& root);

json_io::Json tree_to_json(const HierNode& root);
HierNode tree_from_json(const json_io::Json& node, std::string_view path = "");

std::string serialize(const HierNode& root);
HierNode deserialize(std::string_view text);

}  // namespace hierq
