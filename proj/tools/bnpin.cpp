#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "bnpin/report.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

std::vector<std::pair<std::string, bool>> parse_input_values(const std::string& arg) {
  std::vector<std::pair<std::string, bool>> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 2 != item.size() ||
        (item[eq + 1] != '0' && item[eq + 1] != '1'))
      throw std::runtime_error("--inputs expects NAME=0 or NAME=1 entries, got '" + item + "'");
    out.emplace_back(item.substr(0, eq), item[eq + 1] == '1');
  }
  return out;
}

bnpin::CostWeights parse_cost(const std::string& arg) {
  std::vector<double> vals;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      vals.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error("--cost expects three numbers C1,C2,C3, got '" + item + "'");
    }
  }
  if (vals.size() != 3) throw std::runtime_error("--cost expects three numbers C1,C2,C3");
  bnpin::CostWeights w;
  w.c1 = vals[0];
  w.c2 = vals[1];
  w.c3 = vals[2];
  return w;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pinning observability toolkit for Boolean networks"};
  app.require_subcommand(1);

  std::string file;
  std::string out_path;
  std::string inputs_arg;
  std::string cost_arg;
  std::string format = "text";
  bool force_collapse = false;
  bool force_generic = false;
  bool with_plan = false;
  bnpin::RunOptions opt;

  auto add_common = [&](CLI::App* sub, bool oracle_opts) {
    sub->add_option("--format", format, "report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_flag("--timings", opt.timings, "include wall-clock stage times in the report");
    auto* c =
        sub->add_flag("--collapse", force_collapse, "require direct-read sensors, no rewiring");
    sub->add_flag("--augment", force_generic, "always add virtual states for the sensors")
        ->excludes(c);
    if (oracle_opts) {
      sub->add_option("--oracle-cap", opt.oracle_cap,
                      "most state variables the exhaustive check will take on");
      sub->add_option("--inputs", inputs_arg, "fix input values, e.g. A=1,B=0 (default all 0)");
      sub->add_option("--threads", opt.threads, "oracle worker threads (0 = auto)");
    }
  };
  auto add_plan = [&](CLI::App* sub) {
    sub->add_option("--planner", opt.planner, "greedy or cover")
        ->check(CLI::IsMember({"greedy", "cover"}));
    sub->add_option("--cost", cost_arg, "pin type weights C1,C2,C3");
  };

  CLI::App* check = app.add_subcommand("check", "structural and exhaustive observability check");
  check->add_option("file", file, "network file")->required();
  add_common(check, true);

  CLI::App* oracle = app.add_subcommand("oracle", "exhaustive observability verdict only");
  oracle->add_option("file", file, "network file")->required();
  add_common(oracle, true);

  CLI::App* pin = app.add_subcommand("pin", "plan pins, synthesize controllers, verify");
  pin->add_option("file", file, "network file")->required();
  pin->add_option("--out", out_path, "write the pinned network here")->required();
  add_common(pin, true);
  add_plan(pin);

  CLI::App* graph = app.add_subcommand("graph", "wiring digraph as DOT");
  graph->add_option("file", file, "network file")->required();
  graph->add_option("--out", out_path, "write DOT here instead of stdout");
  graph->add_flag("--plan", with_plan, "overlay planned paths and pin annotations");
  add_common(graph, false);
  add_plan(graph);

  CLI::App* bench = app.add_subcommand("bench", "stage timings over a directory of networks");
  bench->add_option("dir", file, "directory of .bn files")->required();
  bench->add_option("--out", out_path, "write CSV here instead of stdout");
  add_common(bench, true);
  add_plan(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    opt.json = format == "json";
    if (force_collapse) opt.mode = bnpin::AugmentMode::Collapse;
    if (force_generic) opt.mode = bnpin::AugmentMode::Generic;
    if (!inputs_arg.empty()) opt.input_values = parse_input_values(inputs_arg);
    if (!cost_arg.empty()) opt.weights = parse_cost(cost_arg);

    bnpin::CommandResult res;
    if (app.got_subcommand(check)) {
      res = bnpin::cmd_check(slurp(file), file, opt);
    } else if (app.got_subcommand(oracle)) {
      res = bnpin::cmd_oracle(slurp(file), file, opt);
    } else if (app.got_subcommand(pin)) {
      res = bnpin::cmd_pin(slurp(file), file, opt);
    } else if (app.got_subcommand(graph)) {
      res = bnpin::cmd_graph(slurp(file), file, opt, with_plan);
    } else {
      std::vector<std::pair<std::string, std::string>> corpus;
      for (const auto& entry : std::filesystem::directory_iterator(file))
        if (entry.is_regular_file() && entry.path().extension() == ".bn")
          corpus.emplace_back(entry.path().filename().string(), slurp(entry.path().string()));
      res = bnpin::cmd_bench(corpus, opt);
    }

    if (!res.file_output.empty()) {
      if (!out_path.empty()) {
        spill(out_path, res.file_output);
        std::cout << res.report;
      } else {
        // graph/bench without --out: the payload itself goes to stdout
        std::cout << res.file_output;
      }
    } else {
      std::cout << res.report;
    }
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
