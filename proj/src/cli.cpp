#include "rcnu/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcnu/approx.hpp"
#include "rcnu/dot.hpp"
#include "rcnu/netfile.hpp"
#include "rcnu/report.hpp"
#include "rcnu/simulate.hpp"

namespace rcnu {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write " + path);
  f << text;
}

std::string render(const std::vector<StructureViolation>& vs) {
  std::string s;
  for (const auto& v : vs) s += v.message + "\n";
  return s;
}

RcNuNet load_valid_net(const std::string& path) {
  auto net = load_net_file(path);
  if (auto vs = validate_structure(net); !vs.empty()) throw ValidationError("net " + path + " is invalid:\n" + render(vs));
  return net;
}

CostTable parse_costs(const std::string& text) {
  CostTable c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("cost entry '" + item + "' is not key=value");
    const auto key = item.substr(0, eq);
    std::int64_t v;
    try {
      v = std::stoll(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParseError("cost entry '" + item + "' has no integer value");
    }
    if (key == "sync")
      c.sync = v;
    else if (key == "tau")
      c.tau = v;
    else if (key == "visible")
      c.visible = v;
    else
      throw ParseError("unknown cost '" + key + "'");
  }
  return c;
}

DeviationConfig parse_deviations(const std::string& path) {
  DeviationConfig d;
  if (path.empty()) return d;
  try {
    const auto j = nlohmann::json::parse(read_file(path));
    for (const auto& [key, value] : j.items()) {
      if (key == "drop_events")
        d.drop_events = value.get<std::size_t>();
      else if (key == "swap_resources")
        d.swap_resources = value.get<std::size_t>();
      else if (key == "overlaps")
        d.overlaps = value.get<std::size_t>();
      else
        throw ParseError("unknown deviation setting '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("deviation config " + path + ": " + e.what());
  }
  return d;
}

struct AlignArgs {
  std::string net, log, mode = "exact", out, dot, costs = "sync=0,tau=1,visible=10000";
  std::size_t node_budget = 2'000'000, ilp_budget = 1'000'000, fresh_pool = 0;
  bool fail_on_deviation = false;
};

int cmd_validate(const std::string& path, std::ostream& out) {
  const auto net = load_net_file(path);
  const auto vs = validate_structure(net);
  if (vs.empty()) {
    out << "ok\n";
    return kExitOk;
  }
  out << render(vs);
  return kExitDeviation;
}

int cmd_align(const AlignArgs& a, std::ostream& out) {
  const auto net = load_valid_net(a.net);
  const auto log = parse_log_file(a.log);
  SearchOptions opts;
  opts.costs = parse_costs(a.costs);
  opts.node_budget = a.node_budget;
  opts.fresh_spares = a.fresh_pool;
  AlignmentReport report;
  if (a.mode == "approx") {
    ApproxOptions ao;
    ao.search = opts;
    ao.ilp_budget = a.ilp_budget;
    report = make_report(net, log, approximate(net, log, ao), opts.costs);
  } else {
    report = make_report(net, log, optimal_alignment(net, log, opts).alignment, opts.costs, "exact");
  }
  emit(report_to_json(report), a.out, out);
  if (!a.dot.empty()) emit(report_to_dot(report), a.dot, out);
  return a.fail_on_deviation && report.total > 0 ? kExitDeviation : kExitOk;
}

int cmd_simulate(const std::string& net_path, std::size_t cases, std::uint64_t seed, const std::string& config,
                 const std::string& out_path, std::ostream& out) {
  const auto net = load_valid_net(net_path);
  const auto log = simulate(net, cases, seed, parse_deviations(config));
  std::ostringstream csv;
  serialize_log(log, csv);
  emit(csv.str(), out_path, out);
  return kExitOk;
}

int cmd_dot(const std::string& input, const std::string& out_path, std::ostream& out) {
  const auto text = read_file(input);
  std::string dot;
  const bool json = input.size() >= 5 && input.substr(input.size() - 5) == ".json";
  if (!json) {
    dot = log_to_dot(parse_log_file(input));
  } else if (text.find("\"moves\"") != std::string::npos) {
    dot = report_to_dot(parse_report(text));
  } else {
    dot = net_to_dot(parse_net(text));
  }
  emit(dot, out_path, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aligns multi-case event logs against resource-constrained nets"};
  app.require_subcommand(1);

  std::string net_path;
  auto* validate = app.add_subcommand("validate", "check the structural restrictions of a net");
  validate->add_option("net", net_path, "net file (JSON)")->required();

  AlignArgs aa;
  auto* align = app.add_subcommand("align", "align a log against a net and write a JSON report");
  align->add_option("net", aa.net, "net file (JSON)")->required();
  align->add_option("log", aa.log, "event log (CSV)")->required();
  align->add_option("--mode", aa.mode, "exact or approx")->check(CLI::IsMember({"exact", "approx"}));
  align->add_option("--node-budget", aa.node_budget, "stored-state budget per search");
  align->add_option("--ilp-budget", aa.ilp_budget, "branch-and-bound node budget (approx)");
  align->add_option("--fresh-pool", aa.fresh_pool, "extra identifiers for fresh variables");
  align->add_option("--costs", aa.costs, "move costs, e.g. sync=0,tau=1,visible=10000");
  align->add_flag("--fail-on-deviation", aa.fail_on_deviation, "exit 1 when the cost is positive");
  align->add_option("--out", aa.out, "report path (default stdout)");
  align->add_option("--dot", aa.dot, "also write the alignment as DOT");

  std::string sim_net, sim_out, sim_config;
  std::size_t sim_cases = 2;
  std::uint64_t seed = 0;
  auto* sim = app.add_subcommand("simulate", "generate a log by playing the token game");
  sim->add_option("net", sim_net, "net file (JSON)")->required();
  sim->add_option("--cases", sim_cases, "number of cases");
  sim->add_option("--seed", seed, "random seed");
  sim->add_option("--config", sim_config, "deviation settings (JSON)");
  sim->add_option("--out", sim_out, "log path (default stdout)");

  std::string dot_in, dot_out;
  auto* dot = app.add_subcommand("dot", "render a net (.json), report (.json) or log (.csv) as DOT");
  dot->add_option("input", dot_in, "input file")->required();
  dot->add_option("--out", dot_out, "output path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*validate) return cmd_validate(net_path, out);
    if (*align) return cmd_align(aa, out);
    if (*sim) return cmd_simulate(sim_net, sim_cases, seed, sim_config, sim_out, out);
    if (*dot) return cmd_dot(dot_in, dot_out, out);
  } catch (const BudgetError& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace rcnu
