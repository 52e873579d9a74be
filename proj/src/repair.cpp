#include "hierq/repair.hpp"

#include <algorithm>
#include <set>

#include "hierq/error.hpp"

namespace hierq {

namespace {

void clear_states(HierNode& node) {
  node.state.reset();
  for (auto& child : node.children) clear_states(child);
}

std::string unique_clone_label(const std::string& base, const std::set<std::string>& taken) {
  for (std::size_t n = 1;; ++n) {
    auto candidate = base + ".clone" + std::to_string(n);
    if (!taken.contains(candidate)) return candidate;
  }
}

}  // namespace

Organism::Organism(HierNode tree, IrrepLabel target) : tree_(std::move(tree)), target_(target) {
  const auto report = validate(tree_, false);
  if (!report.valid()) {
    const auto& v = report.violations.front();
    throw Error(ErrorCode::InvalidArgument, "organism tree invalid at " + v.path + ": " + v.message);
  }
  const auto levels = depth(tree_);
  if (levels > 3) {
    throw Error(ErrorCode::UnsupportedDepth,
                "only three-level cascades are supported, tree has " + std::to_string(levels) + " levels");
  }
  for (const auto& cell : tree_.children) {
    if (cell.children.empty()) {
      throw Error(ErrorCode::InvalidArgument, "cell \"" + cell.label + "\" has no components");
    }
  }
  if (levels < 3) throw Error(ErrorCode::InvalidArgument, "organism needs three levels");
  if (tree_.rep != target_) {
    throw Error(ErrorCode::InvalidArgument, "root two_j " + std::to_string(tree_.rep.two_j) +
                                                " differs from target " + std::to_string(target_.two_j));
  }
}

std::vector<IrrepLabel> Organism::cell_reps() const {
  std::vector<IrrepLabel> reps;
  reps.reserve(tree_.children.size());
  for (const auto& cell : tree_.children) reps.push_back(cell.rep);
  return reps;
}

std::uint64_t Organism::target_multiplicity() const { return contains(cell_reps(), target_); }

std::vector<IrrepLabel> ComponentPool::reps() const {
  std::vector<IrrepLabel> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.component.rep);
  return out;
}

HierNode ComponentPool::flattened() const {
  HierNode root{root_label, root_level, IrrepLabel{}, std::nullopt, {}};
  for (const auto& e : entries) {
    HierNode c = e.component;
    c.label = e.cell_label + "." + c.label;
    root.children.push_back(std::move(c));
  }
  return root;
}

Organism apply_damage(const Organism& org, const DamageEvent& damage) {
  if (damage.removed.empty()) return org;
  std::set<std::size_t> removed;
  for (const auto idx : damage.removed) {
    if (idx >= org.cell_count()) {
      throw Error(ErrorCode::IndexOutOfRange, "cell index " + std::to_string(idx) + " not below " +
                                                  std::to_string(org.cell_count()));
    }
    if (!removed.insert(idx).second) {
      throw Error(ErrorCode::InvalidArgument, "cell index " + std::to_string(idx) + " removed twice");
    }
  }
  if (removed.size() == org.cell_count()) throw Error(ErrorCode::EmptyRemainder, "damage removes every cell");

  HierNode remainder = org.tree();
  remainder.state.reset();
  remainder.children.clear();
  for (std::size_t i = 0; i < org.cell_count(); ++i) {
    if (!removed.contains(i)) remainder.children.push_back(org.tree().children[i]);
  }
  return Organism(std::move(remainder), org.target());
}

ComponentPool descend(const Organism& remainder) {
  ComponentPool pool{remainder.tree().label, remainder.tree().level, {}};
  const auto& cells = remainder.tree().children;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (const auto& component : cells[i].children) {
      pool.entries.push_back(PoolEntry{component, i, cells[i].label, cells[i].rep});
    }
  }
  return pool;
}

Organism rebuild(const ComponentPool& pool, const HierNode& cell_template, std::size_t cell_count,
                 IrrepLabel target) {
  const int cell_level = pool.root_level + 1;
  if (cell_template.level != cell_level || cell_template.children.empty()) {
    throw Error(ErrorCode::InvalidArgument, "template \"" + cell_template.label + "\" is not a cell sub-tree");
  }
  for (const auto& component : cell_template.children) {
    if (component.level != cell_level + 1 || !component.children.empty()) {
      throw Error(ErrorCode::InvalidArgument, "template \"" + cell_template.label + "\" is not a cell sub-tree");
    }
  }

  std::vector<HierNode> cells;
  std::optional<std::size_t> current_source;
  for (const auto& entry : pool.entries) {
    if (entry.source_cell != current_source) {
      current_source = entry.source_cell;
      cells.push_back(HierNode{entry.cell_label, cell_level, entry.cell_rep, std::nullopt, {}});
    }
    cells.back().children.push_back(entry.component);
  }
  if (cells.size() > cell_count) {
    throw Error(ErrorCode::InvalidArgument, "pool holds " + std::to_string(cells.size()) +
                                                " cells, more than the requested " + std::to_string(cell_count));
  }

  std::set<std::string> taken;
  for (const auto& cell : cells) taken.insert(cell.label);
  while (cells.size() < cell_count) {
    HierNode clone = cell_template;
    clear_states(clone);
    clone.label = unique_clone_label(cell_template.label, taken);
    taken.insert(clone.label);
    cells.push_back(std::move(clone));
  }

  std::vector<IrrepLabel> reps;
  for (const auto& cell : cells) reps.push_back(cell.rep);
  if (contains(reps, target) == 0) {
    std::string list;
    for (const auto& r : reps) list += (list.empty() ? "" : ",") + std::to_string(r.two_j);
    throw Error(ErrorCode::InfeasibleRebuild,
                "cells [" + list + "] cannot carry two_j " + std::to_string(target.two_j));
  }
  return Organism(HierNode{pool.root_label, pool.root_level, target, std::nullopt, std::move(cells)}, target);
}

std::string_view stage_name(StageKind kind) noexcept {
  switch (kind) {
    case StageKind::Damaged: return "damaged";
    case StageKind::Healthy: return "healthy";
    case StageKind::Infeasible: return "infeasible";
    case StageKind::Descended: return "descended";
    case StageKind::Rebuilt: return "rebuilt";
  }
  return "unknown";
}

std::string_view outcome_name(CascadeOutcome outcome) noexcept {
  switch (outcome) {
    case CascadeOutcome::Healthy: return "healthy";
    case CascadeOutcome::Rebuilt: return "rebuilt";
    case CascadeOutcome::InfeasibleRebuild: return "infeasible_rebuild";
  }
  return "unknown";
}

std::vector<StageKind> CascadeTrace::kinds() const {
  std::vector<StageKind> out;
  for (const auto& s : stages) out.push_back(s.kind);
  return out;
}

CascadeTrace repair_cascade(const Organism& org, const DamageEvent& damage) {
  CascadeTrace trace;
  trace.target = org.target();
  trace.cell_count = org.cell_count();
  trace.removed = damage.removed;

  Organism current = org;
  if (!damage.removed.empty()) {
    current = apply_damage(org, damage);
    trace.stages.push_back({StageKind::Damaged, current.target_multiplicity(), current.tree()});
    ++trace.rewrite_steps;
  }

  if (const auto mult = current.target_multiplicity(); mult > 0) {
    trace.stages.push_back({StageKind::Healthy, mult, current.tree()});
    trace.outcome = CascadeOutcome::Healthy;
    return trace;
  }
  trace.stages.push_back({StageKind::Infeasible, 0, current.tree()});

  const auto pool = descend(current);
  trace.stages.push_back({StageKind::Descended, contains(pool.reps(), org.target()), pool.flattened()});
  ++trace.rewrite_steps;

  // The lowest-index surviving cell serves as template.
  const auto& cell_template = current.tree().children.front();
  try {
    auto rebuilt = rebuild(pool, cell_template, org.cell_count(), org.target());
    trace.stages.push_back({StageKind::Rebuilt, rebuilt.target_multiplicity(), rebuilt.tree()});
    trace.outcome = CascadeOutcome::Rebuilt;
    ++trace.rewrite_steps;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InfeasibleRebuild) throw;
    trace.outcome = CascadeOutcome::InfeasibleRebuild;
    trace.error = e.what();
  }
  return trace;
}

Scenario scenario_from_json(const json_io::Json& node, std::string_view path) {
  json_io::ObjectReader reader(node, std::string(path));
  auto tree = tree_from_json(reader.required("organism"), reader.child_path("organism"));
  const auto target = json_io::read_int(reader.required("target"), reader.child_path("target"));
  if (target < 0 || target > 1'000'000) json_io::schema_fail(reader.child_path("target"), "two_j out of range");

  const auto removed_path = reader.child_path("removed");
  const auto& removed_node = json_io::read_array(reader.required("removed"), removed_path);
  DamageEvent damage;
  for (std::size_t i = 0; i < removed_node.size(); ++i) {
    const auto idx = json_io::read_int(removed_node[i], removed_path + "/" + std::to_string(i));
    if (idx < 0) json_io::schema_fail(removed_path + "/" + std::to_string(i), "cell index must be non-negative");
    damage.removed.push_back(static_cast<std::size_t>(idx));
  }
  reader.finish();
  return Scenario{Organism(std::move(tree), IrrepLabel{static_cast<int>(target)}), std::move(damage)};
}

json_io::Json scenario_to_json(const Scenario& scenario) {
  json_io::Json out = json_io::Json::object();
  out["organism"] = tree_to_json(scenario.organism.tree());
  out["target"] = scenario.organism.target().two_j;
  out["removed"] = json_io::Json(scenario.damage.removed);
  return out;
}

json_io::Json trace_to_json(const CascadeTrace& trace) {
  json_io::Json out = json_io::Json::object();
  out["target"] = trace.target.two_j;
  out["cell_count"] = trace.cell_count;
  out["removed"] = json_io::Json(trace.removed);
  out["outcome"] = std::string(outcome_name(trace.outcome));
  out["rewrite_steps"] = trace.rewrite_steps;
  out["error"] = trace.error ? json_io::Json(*trace.error) : json_io::Json(nullptr);
  json_io::Json stages = json_io::Json::array();
  for (const auto& stage : trace.stages) {
    json_io::Json s = json_io::Json::object();
    s["stage"] = std::string(stage_name(stage.kind));
    s["target_multiplicity"] = stage.target_multiplicity;
    s["tree"] = tree_to_json(stage.snapshot);
    stages.push_back(std::move(s));
  }
  out["stages"] = std::move(stages);
  return out;
}

}  // namespace hierq
