#pragma once

// Three-level self-repair cascade: organism -> cells -> cell components.
//
//   damage      remove a block of cells; the remainder loses its whole-level state
//   check       does the product of the remaining cell irreps contain the target?
//   descend     dissolve the remaining cells into their component pool
//   rebuild     regrow cells by cloning a surviving cell until N cells exist
//
// Only three-level organisms are handled; deeper trees are rejected.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hierq/hier_state.hpp"
#include "hierq/json_io.hpp"
#include "hierq/repgroup.hpp"

namespace hierq {

class Organism {
 public:
  /// Requires a structurally valid tree of exactly three levels whose root
  /// carries `target`. Throws UnsupportedDepth for deeper trees.
  Organism(HierNode tree, IrrepLabel target);

  const HierNode& tree() const noexcept { return tree_; }
  IrrepLabel target() const noexcept { return target_; }
  std::size_t cell_count() const noexcept { return tree_.children.size(); }
  std::vector<IrrepLabel> cell_reps() const;
  /// Multiplicity of the target in the product of cell irreps.
  std::uint64_t target_multiplicity() const;
  bool feasible() const { return target_multiplicity() > 0; }

 private:
  HierNode tree_;
  IrrepLabel target_;
};

struct DamageEvent {
  std::vector<std::size_t> removed;  // indices into the organism's cells
};

struct PoolEntry {
  HierNode component;
  std::size_t source_cell;  // index among the remainder's cells
  std::string cell_label;
  IrrepLabel cell_rep;
};

struct ComponentPool {
  std::string root_label;
  int root_level = 0;
  std::vector<PoolEntry> entries;

  std::vector<IrrepLabel> reps() const;
  /// The remainder seen at component level: components hang directly off
  /// the root and keep their original level labels.
  HierNode flattened() const;
};

/// Throws IndexOutOfRange / InvalidArgument on bad indices and EmptyRemainder
/// when every cell would be removed. An empty event returns `org` unchanged.
Organism apply_damage(const Organism& org, const DamageEvent& damage);

ComponentPool descend(const Organism& remainder);

/// Reassembles the pooled cells and clones `cell_template` until there are
/// `cell_count` cells. Throws InfeasibleRebuild when the resulting cell
/// irreps cannot carry `target`.
Organism rebuild(const ComponentPool& pool, const HierNode& cell_template, std::size_t cell_count,
                 IrrepLabel target);

enum class StageKind { Damaged, Healthy, Infeasible, Descended, Rebuilt };
enum class CascadeOutcome { Healthy, Rebuilt, InfeasibleRebuild };

std::string_view stage_name(StageKind kind) noexcept;
std::string_view outcome_name(CascadeOutcome outcome) noexcept;

struct CascadeStage {
  StageKind kind;
  std::uint64_t target_multiplicity;
  HierNode snapshot;
};

struct CascadeTrace {
  IrrepLabel target;
  std::size_t cell_count = 0;
  std::vector<std::size_t> removed;
  std::vector<CascadeStage> stages;
  CascadeOutcome outcome = CascadeOutcome::Healthy;
  std::size_t rewrite_steps = 0;  // damage, descent and rebuild each count once
  std::optional<std::string> error;

  std::vector<StageKind> kinds() const;
};

CascadeTrace repair_cascade(const Organism& org, const DamageEvent& damage);

struct Scenario {
  Organism organism;
  DamageEvent damage;
};

Scenario scenario_from_json(const json_io::Json& node, std::string_view path = "");
json_io::Json scenario_to_json(const Scenario& scenario);
json_io::Json trace_to_json(const CascadeTrace& trace);

}  // namespace hierq
