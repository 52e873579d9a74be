#include "hierq/hier_state.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <set>

#include "hierq/error.hpp"

namespace hierq {

namespace {

void check_shapes(const HierNode& a, const HierNode& b) {
  if (shape_of(a) != shape_of(b)) {
    throw Error(ErrorCode::ShapeMismatch,
                "trees \"" + a.label + "\" and \"" + b.label + "\" have different shapes");
  }
}

void accumulate_inner(const HierNode& a, const HierNode& b, Complex& sum) {
  if (a.state) sum += inner_product(*a.state, *b.state);
  for (std::size_t i = 0; i < a.children.size(); ++i) accumulate_inner(a.children[i], b.children[i], sum);
}

void accumulate_distance(const HierNode& a, const HierNode& b, double& sum) {
  if (a.state) {
    const auto diff = *a.state - *b.state;
    sum += diff.norm() * diff.norm();
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    accumulate_distance(a.children[i], b.children[i], sum);
  }
}

void validate_node(const HierNode& node, const std::string& path, bool check_consistency,
                   ValidationReport& report) {
  auto add = [&](ViolationKind kind, std::string message) {
    report.violations.push_back(Violation{path, kind, std::move(message)});
  };
  if (node.label.empty()) add(ViolationKind::EmptyLabel, "label is empty");
  if (node.level < 0) add(ViolationKind::NegativeLevel, "level " + std::to_string(node.level) + " < 0");
  if (node.rep.two_j < 0) add(ViolationKind::NegativeRep, "two_j " + std::to_string(node.rep.two_j) + " < 0");

  std::set<std::string> labels;
  bool reps_ok = node.rep.two_j >= 0;
  for (const auto& child : node.children) {
    if (child.level != node.level + 1) {
      add(ViolationKind::LevelStep, "level step ≠ 1: child \"" + child.label + "\" at level " +
                                        std::to_string(child.level) + " under level " +
                                        std::to_string(node.level));
    }
    if (!labels.insert(child.label).second) {
      add(ViolationKind::DuplicateLabel, "duplicate child label \"" + child.label + "\"");
    }
    reps_ok = reps_ok && child.rep.two_j >= 0;
  }

  if (check_consistency && !node.children.empty() && reps_ok) {
    std::vector<IrrepLabel> reps;
    reps.reserve(node.children.size());
    for (const auto& child : node.children) reps.push_back(child.rep);
    if (contains(reps, node.rep) == 0) {
      add(ViolationKind::Inconsistent, "product of children reps does not contain two_j " +
                                           std::to_string(node.rep.two_j));
    }
  }

  for (const auto& child : node.children) {
    validate_node(child, path + "/" + child.label, check_consistency, report);
  }
}

}  // namespace

std::string_view violation_kind_name(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::NegativeLevel: return "negative_level";
    case ViolationKind::NegativeRep: return "negative_rep";
    case ViolationKind::EmptyLabel: return "empty_label";
    case ViolationKind::LevelStep: return "level_step";
    case ViolationKind::DuplicateLabel: return "duplicate_label";
    case ViolationKind::Inconsistent: return "inconsistent_rep";
  }
  return "unknown";
}

TreeShape shape_of(const HierNode& root) {
  TreeShape shape{root.label, root.level, root.rep.two_j, root.state ? root.state->dim() : 0, {}};
  shape.children.reserve(root.children.size());
  for (const auto& child : root.children) shape.children.push_back(shape_of(child));
  return shape;
}

ValidationReport validate(const HierNode& root, bool check_consistency) {
  ValidationReport report;
  validate_node(root, root.label, check_consistency, report);
  return report;
}

HierNode bind(std::vector<HierNode> parts, std::string new_label, IrrepLabel new_rep) {
  if (parts.empty()) throw Error(ErrorCode::EmptyParts, "bind needs at least one part");
  const int level = parts.front().level;
  for (const auto& part : parts) {
    if (part.level != level) {
      throw Error(ErrorCode::LevelMismatch, "part \"" + part.label + "\" at level " +
                                                std::to_string(part.level) + ", expected " +
                                                std::to_string(level));
    }
  }
  if (level < 1) throw Error(ErrorCode::LevelMismatch, "parts at level 0 have no level above them");
  if (new_rep.two_j < 0) throw Error(ErrorCode::InvalidArgument, "two_j must be non-negative");
  return HierNode{std::move(new_label), level - 1, new_rep, std::nullopt, std::move(parts)};
}

Complex hier_inner_product(const HierNode& a, const HierNode& b) {
  check_shapes(a, b);
  Complex sum = 0.0;
  accumulate_inner(a, b, sum);
  return sum;
}

double hier_distance(const HierNode& a, const HierNode& b) {
  check_shapes(a, b);
  double sum = 0.0;
  accumulate_distance(a, b, sum);
  return std::sqrt(sum);
}

std::size_t depth(const HierNode& root) {
  std::size_t deepest = 0;
  for (const auto& child : root.children) deepest = std::max(deepest, depth(child));
  return deepest + 1;
}

json_io::Json tree_to_json(const HierNode& root) {
  json_io::Json out = json_io::Json::object();
  out["label"] = root.label;
  out["level"] = root.level;
  out["two_j"] = root.rep.two_j;
  out["state"] = root.state ? json_io::encode_state(*root.state) : json_io::Json(nullptr);
  json_io::Json children = json_io::Json::array();
  for (const auto& child : root.children) children.push_back(tree_to_json(child));
  out["children"] = std::move(children);
  return out;
}

HierNode tree_from_json(const json_io::Json& node, std::string_view path) {
  json_io::ObjectReader reader(node, std::string(path));
  HierNode out;
  out.label = json_io::read_string(reader.required("label"), reader.child_path("label"));

  auto read_small_int = [&](std::string_view key) {
    const auto value = json_io::read_int(reader.required(key), reader.child_path(key));
    if (value < INT_MIN || value > INT_MAX) json_io::schema_fail(reader.child_path(key), "integer out of range");
    return static_cast<int>(value);
  };
  out.level = read_small_int("level");
  out.rep.two_j = read_small_int("two_j");

  const auto& state = reader.required("state");
  if (!state.is_null()) out.state = json_io::decode_state(state, reader.child_path("state"));

  const auto children_path = reader.child_path("children");
  const auto& children = json_io::read_array(reader.required("children"), children_path);
  out.children.reserve(children.size());
  for (std::size_t i = 0; i < children.size(); ++i) {
    out.children.push_back(tree_from_json(children[i], children_path + "/" + std::to_string(i)));
  }
  reader.finish();
  return out;
}

std::string serialize(const HierNode& root) { return json_io::to_canonical(tree_to_json(root)); }

HierNode deserialize(std::string_view text) { return tree_from_json(json_io::parse_document(text)); }

}  // namespace hierq
