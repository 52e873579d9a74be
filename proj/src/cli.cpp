#include "hierq/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "hierq/density.hpp"
#include "hierq/error.hpp"
#include "hierq/haar.hpp"
#include "hierq/hier_state.hpp"
#include "hierq/json_io.hpp"
#include "hierq/repair.hpp"
#include "hierq/repgroup.hpp"

namespace hierq::cli {

namespace {

using json_io::Json;

constexpr double kMaxTolerance = 1e-3;

struct ScenarioConfig {
  std::string operation;
  std::string input = "-";
  std::string output = "-";
  std::optional<double> tolerance;
  double resolved_tolerance = kDefaultTolerance;
};

// Failure that already carries its exit status.
struct CommandFailure {
  int code;
  std::string message;
};

std::string one_line(std::string text) {
  for (auto& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NumericFailure: return kNumericFailure;
    case ErrorCode::InfeasibleRebuild: return kInfeasibleRepair;
    default: return kInvalidInput;
  }
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandFailure{kInvalidInput, "cannot read " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw CommandFailure{kInvalidInput, "cannot write " + path};
  file << text;
  if (!file) throw CommandFailure{kInvalidInput, "cannot write " + path};
}

Json read_input(const ScenarioConfig& cfg) { return json_io::parse_document(read_text(cfg.input)); }

void emit(const ScenarioConfig& cfg, const Json& doc, std::ostream& out) {
  write_text(cfg.output, json_io::to_canonical(doc), out);
}

double parse_tolerance(const std::string& text, std::string_view source) {
  double value = 0.0;
  std::size_t used = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw CommandFailure{kInvalidInput, std::string(source) + " is not a number: " + text};
  }
  return value;
}

double resolve_tolerance(const ScenarioConfig& cfg, const std::optional<std::string>& env) {
  double tol = kDefaultTolerance;
  std::string_view source = "default";
  if (cfg.tolerance) {
    tol = *cfg.tolerance;
    source = "--tol";
  } else if (env && !env->empty()) {
    tol = parse_tolerance(*env, "HIERQ_TOLERANCE");
    source = "HIERQ_TOLERANCE";
  }
  if (!(tol > 0.0 && tol <= kMaxTolerance)) {
    throw CommandFailure{kInvalidInput, std::string(source) + " must lie in (0, 1e-3]"};
  }
  return tol;
}

Json value_doc(double value) {
  Json out = Json::object();
  out["value"] = value;
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand bodies

int do_haar_encode(const ScenarioConfig& cfg, std::optional<double> threshold, std::ostream& out) {
  auto tree = encode(leaves_from_json(read_input(cfg)));
  if (threshold) tree = truncate(tree, *threshold);
  emit(cfg, haar_to_json(tree), out);
  return kSuccess;
}

int do_haar_decode(const ScenarioConfig& cfg, std::ostream& out) {
  emit(cfg, leaves_to_json(decode(haar_from_json(read_input(cfg)))), out);
  return kSuccess;
}

int do_density(const ScenarioConfig& cfg, std::ostream& out) {
  const auto c = joint_from_json(read_input(cfg), "", cfg.resolved_tolerance);
  emit(cfg, json_io::encode_operator(build_density(c, cfg.resolved_tolerance).op()), out);
  return kSuccess;
}

int do_reduce(const ScenarioConfig& cfg, std::size_t subsystem, std::ostream& out) {
  const auto c = joint_from_json(read_input(cfg), "", cfg.resolved_tolerance);
  emit(cfg, json_io::encode_operator(reduce(c, subsystem, cfg.resolved_tolerance).op()), out);
  return kSuccess;
}

int do_expect(const ScenarioConfig& cfg, std::ostream& out) {
  const auto doc = read_input(cfg);
  json_io::ObjectReader reader(doc, "");
  const auto c = joint_from_json(reader.required("coefficients"), "/coefficients", cfg.resolved_tolerance);
  const auto a = json_io::decode_operator(reader.required("observable"), "/observable");
  reader.finish();
  emit(cfg, value_doc(expectation(c, a, cfg.resolved_tolerance)), out);
  return kSuccess;
}

int do_macro_expect(const ScenarioConfig& cfg, std::ostream& out) {
  const auto doc = read_input(cfg);
  json_io::ObjectReader reader(doc, "");
  const auto c = joint_from_json(reader.required("coefficients"), "/coefficients", cfg.resolved_tolerance);
  const auto& blocks_node = json_io::read_array(reader.required("blocks"), "/blocks");
  reader.finish();
  std::vector<Operator> blocks;
  for (std::size_t m = 0; m < blocks_node.size(); ++m) {
    blocks.push_back(json_io::decode_operator(blocks_node[m], "/blocks/" + std::to_string(m)));
  }
  if (blocks.empty()) json_io::schema_fail("/blocks", "need at least one block");
  const MacroConditionedOperator b(std::move(blocks));
  emit(cfg, value_doc(macro_expectation(c, b, cfg.resolved_tolerance)), out);
  return kSuccess;
}

int do_diag(const ScenarioConfig& cfg, std::ostream& out) {
  const DensityMatrix rho(json_io::decode_operator(read_input(cfg), ""), cfg.resolved_tolerance);
  const auto spectrum = diagonalize(rho, cfg.resolved_tolerance);
  Json doc = Json::object();
  doc["weights"] = Json(spectrum.weights);
  doc["eigenvectors"] = json_io::encode_operator(spectrum.eigenvectors);
  emit(cfg, doc, out);
  return kSuccess;
}

int do_cg(const ScenarioConfig& cfg, const std::vector<int>& reps_in, std::optional<int> target,
          std::ostream& out) {
  const auto reps = to_irreps(reps_in);
  const auto product = decompose_product(reps);
  Json doc = Json::object();
  doc["reps"] = Json(reps_in);
  Json series = Json::array();
  for (const auto& [two_j, mult] : product) {
    Json term = Json::object();
    term["two_j"] = two_j;
    term["multiplicity"] = mult;
    series.push_back(std::move(term));
  }
  doc["decomposition"] = std::move(series);
  doc["dimension"] = total_dimension(product);
  if (target) {
    doc["target"] = *target;
    doc["multiplicity"] = contains(reps, IrrepLabel{*target});
  }
  emit(cfg, doc, out);
  return kSuccess;
}

int do_validate(const ScenarioConfig& cfg, bool consistency, std::ostream& out, std::ostream& err) {
  const auto tree = tree_from_json(read_input(cfg));
  const auto report = validate(tree, consistency);
  Json doc = Json::object();
  doc["valid"] = report.valid();
  Json list = Json::array();
  for (const auto& v : report.violations) {
    Json item = Json::object();
    item["path"] = v.path;
    item["kind"] = std::string(violation_kind_name(v.kind));
    item["message"] = v.message;
    list.push_back(std::move(item));
  }
  doc["violations"] = std::move(list);
  emit(cfg, doc, out);
  if (!report.valid()) {
    const auto& first = report.violations.front();
    err << "hierq: " << report.violations.size() << " violation(s); first at " << first.path << ": "
        << one_line(first.message) << "\n";
    return kInvalidInput;
  }
  return kSuccess;
}

int run_one_repair(const std::string& input, const std::string& output, std::ostream& out, std::ostream& err) {
  const auto scenario = scenario_from_json(json_io::parse_document(read_text(input)));
  const auto trace = repair_cascade(scenario.organism, scenario.damage);
  write_text(output, json_io::to_canonical(trace_to_json(trace)), out);
  if (trace.outcome != CascadeOutcome::InfeasibleRebuild) return kSuccess;
  err << "hierq: " << input << ": " << one_line(trace.error.value_or("infeasible rebuild")) << "\n";
  return kInfeasibleRepair;
}

template <typename Fn>
int guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const CommandFailure& f) {
    err << "hierq: " << one_line(f.message) << "\n";
    return f.code;
  } catch (const Error& e) {
    err << "hierq: " << one_line(e.what()) << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "hierq: internal failure: " << one_line(e.what()) << "\n";
    return kNumericFailure;
  }
}

int do_repair_batch(const std::vector<std::string>& inputs, const std::string& output_dir, std::ostream& out,
                    std::ostream& err) {
  if (output_dir.empty()) throw CommandFailure{kInvalidInput, "--batch needs --output-dir"};
  std::filesystem::create_directories(output_dir);

  struct Result {
    std::string output;
    int code;
    std::string diagnostic;
  };
  std::set<std::string> stems;
  for (const auto& input : inputs) {
    const auto stem = std::filesystem::path(input).stem().string();
    if (!stems.insert(stem).second) {
      throw CommandFailure{kInvalidInput, "two batch inputs share the trace name " + stem + ".trace.json"};
    }
  }
  std::vector<std::future<Result>> jobs;
  for (const auto& input : inputs) {
    const auto stem = std::filesystem::path(input).stem().string();
    const auto output = (std::filesystem::path(output_dir) / (stem + ".trace.json")).string();
    jobs.push_back(std::async(std::launch::async, [input, output] {
      std::ostringstream sink;
      std::ostringstream diag;
      const int code = guarded([&] { return run_one_repair(input, output, sink, diag); }, diag);
      return Result{output, code, diag.str()};
    }));
  }

  int worst = kSuccess;
  Json results = Json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    auto r = jobs[i].get();
    err << r.diagnostic;
    worst = std::max(worst, r.code);
    Json item = Json::object();
    item["input"] = inputs[i];
    item["output"] = r.output;
    item["exit_code"] = r.code;
    results.push_back(std::move(item));
  }
  Json doc = Json::object();
  doc["results"] = std::move(results);
  out << json_io::to_canonical(doc);
  return worst;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& env_tolerance) {
  CLI::App app{"Hierarchical quantum state toolkit", "hierq"};
  app.require_subcommand(1);

  ScenarioConfig cfg;
  auto add_io = [&cfg](CLI::App* sub, bool with_input) {
    if (with_input) sub->add_option("-i,--input", cfg.input, "input JSON file, - for stdin");
    sub->add_option("-o,--output", cfg.output, "output JSON file, - for stdout");
    sub->add_option("--tol", cfg.tolerance, "numeric tolerance in (0, 1e-3]");
  };

  std::optional<double> truncate_threshold;
  auto* haar_encode = app.add_subcommand("haar-encode", "Haar-encode a leaf layer");
  add_io(haar_encode, true);
  haar_encode->add_option("--truncate", truncate_threshold, "zero detail vectors with norm below this");

  auto* haar_decode = app.add_subcommand("haar-decode", "decode a Haar tree back to leaves");
  add_io(haar_decode, true);

  auto* density = app.add_subcommand("density", "density matrix of joint coefficients");
  add_io(density, true);

  std::size_t subsystem = 0;
  auto* reduce_cmd = app.add_subcommand("reduce", "reduced density matrix of one micro factor");
  add_io(reduce_cmd, true);
  reduce_cmd->add_option("-s,--subsystem", subsystem, "micro factor, 1-based")->required();

  auto* expect_cmd = app.add_subcommand("expect", "expectation of a micro-level observable");
  add_io(expect_cmd, true);

  auto* macro_cmd = app.add_subcommand("macro-expect", "expectation of a macro-conditioned observable");
  add_io(macro_cmd, true);

  auto* diag_cmd = app.add_subcommand("diag", "eigen-decomposition of a density matrix");
  add_io(diag_cmd, true);

  std::vector<int> reps;
  std::optional<int> target;
  auto* cg_cmd = app.add_subcommand("cg", "SU(2) product decomposition");
  add_io(cg_cmd, false);
  cg_cmd->add_option("--reps", reps, "comma-separated two_j values")->delimiter(',')->required();
  cg_cmd->add_option("--target", target, "two_j whose multiplicity is reported");

  bool consistency = false;
  auto* validate_cmd = app.add_subcommand("validate", "validate a hierarchical tree");
  add_io(validate_cmd, true);
  validate_cmd->add_flag("--consistency", consistency, "check irrep containment at every inner node");

  std::vector<std::string> batch_inputs;
  std::string output_dir;
  auto* repair_cmd = app.add_subcommand("repair", "run the self-repair cascade on a scenario");
  add_io(repair_cmd, true);
  repair_cmd->add_option("--batch", batch_inputs, "scenario files processed concurrently");
  repair_cmd->add_option("--output-dir", output_dir, "trace directory for --batch");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "hierq: " << one_line(e.what()) << "\n";
    return kInvalidInput;
  }

  return guarded(
      [&]() -> int {
        cfg.resolved_tolerance = resolve_tolerance(cfg, env_tolerance);
        if (*haar_encode) return do_haar_encode(cfg, truncate_threshold, out);
        if (*haar_decode) return do_haar_decode(cfg, out);
        if (*density) return do_density(cfg, out);
        if (*reduce_cmd) return do_reduce(cfg, subsystem, out);
        if (*expect_cmd) return do_expect(cfg, out);
        if (*macro_cmd) return do_macro_expect(cfg, out);
        if (*diag_cmd) return do_diag(cfg, out);
        if (*cg_cmd) return do_cg(cfg, reps, target, out);
        if (*validate_cmd) return do_validate(cfg, consistency, out, err);
        if (!batch_inputs.empty()) return do_repair_batch(batch_inputs, output_dir, out, err);
        return run_one_repair(cfg.input, cfg.output, out, err);
      },
      err);
}

}  // namespace hierq::cli
