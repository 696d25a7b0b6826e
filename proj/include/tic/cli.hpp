#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tic/audit.hpp"
#include "tic/instance_gen.hpp"
#include "tic/io.hpp"
#include "tic/mechanisms.hpp"
#include "tic/reproduce.hpp"
#include "tic/solver.hpp"

namespace tic::cli {

enum ExitCode : int { kOk = 0, kUnexpected = 1, kUsage = 2 };

/// Input problems that map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string instance_path;
  std::string mechanism;
  std::size_t n = 0;
  std::string epsilon = "1/2";
  std::string delta = "1/1000";
  std::uint64_t seed = 0;
  std::string grid_step = "1/4";
  std::string format = "json";
  std::string out_path;
  // generate only
  std::string family;
  std::size_t k = 1;
  std::string gap = "2";
  std::string span = "8";
  std::string which = "base";
  std::size_t iteration_cap = 0;
};

namespace detail {

using io::Json;

inline Coord number_option(const std::string& text, const char* flag) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

inline Instance load_instance(const Options& o) {
  if (o.instance_path.empty()) throw UsageError("--instance is required");
  std::ifstream in(o.instance_path, std::ios::binary);
  if (!in) throw UsageError("cannot open instance file '" + o.instance_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return io::parse_instance(buf.str());
  } catch (const io::ParseError& e) {
    throw UsageError(o.instance_path + ": " + e.what());
  }
}

inline Mechanism load_mechanism(const Options& o) {
  if (o.mechanism.empty()) throw UsageError("--mechanism is required");
  try {
    return parse_mechanism(o.mechanism);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

inline std::size_t require_n(const Options& o) {
  if (o.n == 0) throw UsageError("--n is required");
  return o.n;
}

struct Output {
  Json report;
  int exit_code = kOk;
  // Rows for CSV; when empty the report object becomes a single row.
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  bool raw_instance = false;
};

inline std::string render(const Output& result, const std::string& format) {
  if (format == "json") return result.report.dump(2) + "\n";
  std::string text;
  if (!result.csv_header.empty()) {
    text += io::csv_line(result.csv_header);
    for (const auto& row : result.csv_rows) text += io::csv_line(row);
    return text;
  }
  std::vector<std::string> header, row;
  for (const auto& [key, value] : result.report.items()) {
    header.push_back(key);
    row.push_back(io::csv_cell(value));
  }
  return io::csv_line(header) + io::csv_line(row);
}

inline Json lottery_report(const Instance& inst, const Mechanism& mech, Json report) {
  Lottery lot = mech.lottery(inst);
  if (mech.is_deterministic()) report["placement"] = lot.entries().front().placement.s.to_string();
  report["lottery"] = io::lottery_json(lot);
  report["sc"] = io::number_json(expected_social_cost(inst, lot));
  return report;
}

inline Json head(const std::string& echo) {
  Json j;
  j["command"] = echo;
  return j;
}

inline Output cmd_generate(const Options& o, const std::string&) {
  Coord gap = number_option(o.gap, "--gap");
  Output res;
  std::optional<Instance> inst;
  try {
    const std::string& f = o.family;
    if (f == "wci1") {
      inst = gen::wci1(require_n(o), gap);
    } else if (f == "wci2") {
      inst = gen::wci2(require_n(o), gap);
    } else if (f == "two-cluster") {
      inst = gen::two_cluster_seed(require_n(o));
    } else if (f == "singleton-group") {
      inst = gen::singleton_group(require_n(o), gap);
    } else if (f == "mirror-singleton-group") {
      inst = mirror(gen::singleton_group(require_n(o), gap));
    } else if (f == "weighted-median-worst") {
      inst = gen::weighted_median_worst(o.k, number_option(o.epsilon, "--epsilon"));
    } else if (f == "unknown-length-pair") {
      auto pair = gen::unknown_length_pair(number_option(o.epsilon, "--epsilon"));
      if (o.which != "base" && o.which != "shrunk") throw UsageError("--which must be base or shrunk");
      inst = o.which == "base" ? pair.first : pair.second;
    } else if (f == "random") {
      gen::GeneratorParams p;
      p.n = require_n(o);
      p.seed = o.seed;
      p.grid_step = number_option(o.grid_step, "--grid-step");
      p.span = number_option(o.span, "--span");
      inst = gen::random_instance(p);
    } else {
      throw UsageError("unknown --family '" + f + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  res.report = io::instance_json(*inst);
  res.raw_instance = true;
  res.csv_header = {"id", "s", "length"};
  for (const auto& a : inst->in_input_order()) {
    res.csv_rows.push_back({std::to_string(a.id), a.s.to_string(), a.length.to_string()});
  }
  return res;
}

inline Output cmd_solve(const Options& o, const std::string& echo) {
  Instance inst = load_instance(o);
  Optimum opt = optimal_placement(inst);
  Output res;
  res.report = head(echo);
  res.report["instance_digest"] = io::instance_digest(inst);
  res.report["optimal_placement"] = opt.placement.s.to_string();
  res.report["opt"] = io::number_json(opt.social_cost);
  res.report["status"] = "OK";
  return res;
}

inline Output cmd_mech(const Options& o, const std::string& echo) {
  Instance inst = load_instance(o);
  Mechanism mech = load_mechanism(o);
  Json report = head(echo);
  report["mechanism"] = mech.name();
  report["instance_digest"] = io::instance_digest(inst);
  Output res;
  try {
    res.report = lottery_report(inst, mech, std::move(report));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  res.report["status"] = "OK";
  return res;
}

inline Output cmd_ratio(const Options& o, const std::string& echo) {
  Instance inst = load_instance(o);
  Mechanism mech = load_mechanism(o);
  std::optional<RatioReport> r;
  try {
    r = approximation_ratio(mech, inst);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  Output res;
  res.report = head(echo);
  res.report["mechanism"] = mech.name();
  res.report["instance_digest"] = io::instance_digest(inst);
  if (mech.is_deterministic()) res.report["placement"] = r->mechanism_output.entries().front().placement.s.to_string();
  res.report["lottery"] = io::lottery_json(r->mechanism_output);
  res.report["optimal_placement"] = r->optimal_placement.s.to_string();
  res.report["sc"] = io::number_json(r->mechanism_cost);
  res.report["opt"] = io::number_json(r->optimal_cost);
  res.report["ratio"] = io::ratio_json(r->ratio);
  res.report["status"] = "OK";
  return res;
}

inline Output cmd_audit(const Options& o, const std::string& echo) {
  Instance inst = load_instance(o);
  Mechanism mech = load_mechanism(o);
  Coord step = number_option(o.grid_step, "--grid-step");
  if (step <= 0) throw UsageError("--grid-step must be positive");
  std::vector<DeviationWitness> found;
  try {
    found = audit_all_agents(mech, inst, default_misreport_positions(inst, step));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  Output res;
  res.report = head(echo);
  res.report["mechanism"] = mech.name();
  res.report["instance_digest"] = io::instance_digest(inst);
  res.report["grid_step"] = step.to_string();
  Json ws = Json::array();
  for (const auto& w : found) ws.push_back(io::witness_json(w));
  res.report["witnesses"] = std::move(ws);
  if (found.empty()) {
    res.report["status"] = "OK";
  } else if (mech.traits().claims_truthful) {
    res.report["status"] = "VIOLATION";
    res.exit_code = kUnexpected;
  } else {
    res.report["status"] = "WITNESS";
  }
  return res;
}

inline Output cmd_adversary(const Options& o, const std::string& echo) {
  Mechanism mech = load_mechanism(o);
  Coord delta = number_option(o.delta, "--delta");
  std::optional<GameTranscript> tr;
  try {
    tr = adversary_game(mech, require_n(o), {delta, o.iteration_cap});
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  Output res;
  res.report = head(echo);
  res.report["mechanism"] = mech.name();
  res.report["n"] = o.n;
  res.report["delta"] = delta.to_string();
  res.report["mirrored"] = tr->mirrored;
  res.report["family_reached"] = tr->family_reached;
  Json steps = Json::array();
  for (const auto& s : tr->steps) {
    Json j;
    j["instance_digest"] = io::instance_digest(s.instance);
    j["lefts"] = Json::array();
    for (const auto& a : s.instance.in_input_order()) j["lefts"].push_back(a.s.to_string());
    j["placement"] = s.placement.s.to_string();
    j["intersecting"] = s.intersecting;
    j["family"] = s.family;
    if (s.moved_agent) {
      j["moved_agent"] = *s.moved_agent;
      j["new_report"] = io::interval_json(*s.new_report);
    }
    steps.push_back(std::move(j));
  }
  res.report["steps"] = std::move(steps);
  if (const auto* w = std::get_if<RatioWitness>(&tr->status)) {
    res.report["outcome"] = "RatioWitness";
    res.report["witness"] = io::ratio_witness_json(*w);
    res.report["status"] = "WITNESS";
  } else if (const auto* v = std::get_if<TruthfulnessViolation>(&tr->status)) {
    res.report["outcome"] = "TruthfulnessViolation";
    res.report["violation"] = io::witness_json(v->witness);
    res.report["status"] = "VIOLATION";
    if (mech.traits().claims_truthful) res.exit_code = kUnexpected;
  } else {
    res.report["outcome"] = "Exhausted";
    res.report["reason"] = std::get<Exhausted>(tr->status).reason;
    res.report["status"] = "FAIL";
    res.exit_code = kUnexpected;
  }
  return res;
}

inline Output cmd_lower_bound(const Options& o, const std::string& echo) {
  std::size_t n = require_n(o);
  if (o.mechanism.empty()) throw UsageError("--mechanism is required");
  std::vector<Coord> w;
  Coord value, closed;
  try {
    w = order_statistic_weights(o.mechanism, n);
    value = order_statistic_lower_bound(w, n);
    closed = order_statistic_lower_bound_closed_form(w, n);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  Coord bound = Coord{3, 2} - Coord{1} / reproduce::sn(n);
  Output res;
  res.report = head(echo);
  res.report["mechanism"] = o.mechanism;
  res.report["n"] = n;
  Json ws = Json::array();
  for (const auto& x : w) ws.push_back(x.to_string());
  res.report["weights"] = std::move(ws);
  res.report["value"] = io::number_json(value);
  res.report["closed_form"] = io::number_json(closed);
  res.report["bound"] = io::number_json(bound);
  bool ok = value >= bound && value == closed;
  res.report["status"] = ok ? "OK" : "FAIL";
  if (!ok) res.exit_code = kUnexpected;
  return res;
}

inline Output cmd_probe(const Options& o, const std::string& echo) {
  Mechanism mech = load_mechanism(o);
  if (mech.traits().equal_unit_only) {
    throw UsageError(mech.name() + " does not accept reported lengths");
  }
  Coord eps = number_option(o.epsilon, "--epsilon");
  std::optional<ProbeResult> r;
  try {
    r = unknown_lengths_probe(mech, eps);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  Output res;
  res.report = head(echo);
  res.report["mechanism"] = mech.name();
  res.report["epsilon"] = eps.to_string();
  res.report["path"] = r->lottery_path ? "lottery" : "deterministic";
  res.report["side"] = r->right_side ? "right" : "left";
  if (const auto* w = std::get_if<RatioWitness>(&r->outcome)) {
    res.report["outcome"] = "RatioWitness";
    res.report["witness"] = io::ratio_witness_json(*w);
    res.report["status"] = "WITNESS";
  } else {
    const auto& v = std::get<TruthfulnessViolation>(r->outcome);
    res.report["outcome"] = "TruthfulnessViolation";
    res.report["instance"] = io::instance_json(v.instance);
    res.report["violation"] = io::witness_json(v.witness);
    res.report["status"] = "VIOLATION";
  }
  return res;
}

inline Output cmd_reproduce(const Options&, const std::string& echo) {
  std::vector<reproduce::ClaimRow> rows = reproduce::all_claims();
  Output res;
  res.report = head(echo);
  Json list = Json::array();
  bool all = true;
  res.csv_header = {"claim", "parameter", "expected", "measured", "status"};
  for (const auto& r : rows) {
    Json j;
    j["claim"] = r.claim;
    j["parameter"] = r.parameter;
    j["expected"] = r.expected;
    j["measured"] = r.measured;
    j["status"] = r.pass ? "PASS" : "FAIL";
    list.push_back(std::move(j));
    all = all && r.pass;
    res.csv_rows.push_back({io::csv_cell(r.claim), io::csv_cell(r.parameter), io::csv_cell(r.expected),
                            io::csv_cell(r.measured), r.pass ? "PASS" : "FAIL"});
  }
  res.report["rows"] = std::move(list);
  res.report["status"] = all ? "OK" : "FAIL";
  res.exit_code = all ? kOk : kUnexpected;
  return res;
}

inline void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--instance", o.instance_path, "Instance file (JSON)");
  sub->add_option("--mechanism", o.mechanism, "Mechanism selection string");
  sub->add_option("--n", o.n, "Number of agents");
  sub->add_option("--epsilon", o.epsilon, "Epsilon as a rational or decimal string");
  sub->add_option("--delta", o.delta, "Adversary displacement delta");
  sub->add_option("--seed", o.seed, "Random seed");
  sub->add_option("--grid-step", o.grid_step, "Grid step");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out", o.out_path, "Write the report to this file");
}

}  // namespace detail

/// Runs one CLI invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Truthful interval covering workbench", "tic"};
  app.require_subcommand(1);
  Options o;

  struct Entry {
    const char* name;
    const char* help;
    detail::Output (*fn)(const Options&, const std::string&);
  };
  const Entry entries[] = {
      {"generate", "Emit an instance file from a named family", detail::cmd_generate},
      {"solve", "Optimal placement and social cost", detail::cmd_solve},
      {"mech", "Run a mechanism on an instance", detail::cmd_mech},
      {"ratio", "Approximation ratio of a mechanism on an instance", detail::cmd_ratio},
      {"audit", "Search for profitable misreports", detail::cmd_audit},
      {"adversary", "Play the deterministic lower-bound game", detail::cmd_adversary},
      {"lower-bound", "Order-statistic mixture lower bound", detail::cmd_lower_bound},
      {"probe", "Unknown-lengths impossibility probe", detail::cmd_probe},
      {"reproduce", "Re-derive every bound and print a claim table", detail::cmd_reproduce},
  };
  std::vector<CLI::App*> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    detail::add_common(sub, o);
    subs.push_back(sub);
  }
  CLI::App* gen_cmd = subs[0];
  gen_cmd->add_option("--family", o.family,
                      "wci1 | wci2 | two-cluster | singleton-group | mirror-singleton-group | "
                      "weighted-median-worst | unknown-length-pair | random")
      ->required();
  gen_cmd->add_option("--k", o.k, "k for weighted-median-worst");
  gen_cmd->add_option("--gap", o.gap, "Singleton spacing");
  gen_cmd->add_option("--span", o.span, "Grid span for random instances");
  gen_cmd->add_option("--which", o.which, "base | shrunk for unknown-length-pair");
  subs[5]->add_option("--iteration-cap", o.iteration_cap, "Step limit (default 16n)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  std::string echo;
  for (const auto& a : args) echo += (echo.empty() ? "" : " ") + a;

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      detail::Output res = entries[i].fn(o, echo);
      std::string text = detail::render(res, o.format);
      if (o.out_path.empty()) {
        out << text;
      } else {
        std::ofstream f(o.out_path, std::ios::binary | std::ios::trunc);
        if (!f) throw UsageError("cannot write '" + o.out_path + "'");
        f << text;
      }
      return res.exit_code;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace tic::cli
