// dynrank_cli: run an update stream through one of the maintainers.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "dynrank/stream.hpp"

namespace {

enum Exit { ok = 0, usage = 1, verify = 2, probabilistic = 3 };

int exit_code(dynrank::Errc code) {
  switch (code) {
    case dynrank::Errc::verify_failure: return verify;
    case dynrank::Errc::probabilistic_failure: return probabilistic;
    default: return usage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic rank, basis, submatrix and matching maintainers over GF(p)"};
  dynrank::RunOptions opts;
  std::string input = "-";
  std::string dot_path;
  bool stats = false;

  app.add_option("--mode", opts.mode, "Maintainer to drive")
      ->required()
      ->check(CLI::IsMember(dynrank::stream_modes()));
  app.add_option("--input", input, "Stream file, '-' for stdin");
  app.add_option("--prime", opts.prime, "Field modulus, overrides the stream header");
  app.add_option("--seed", opts.seed, "Random seed, overrides the stream header");
  app.add_option("--copies", opts.copies, "Sketch copies per level (0: automatic)")->check(CLI::NonNegativeNumber);
  app.add_flag("--verify", opts.verify, "Check every output line against an oracle");
  app.add_flag("--stats", stats, "Print a JSON block of counters at the end");
  app.add_flag("--worst-case-spread", opts.worst_case_spread, "Spread level activations over later updates");
  app.add_flag("--low-rank", opts.low_rank, "Basis mode: sketched levels");
  app.add_option("--dump-gadget-dot", dot_path, "Submatrix mode: write the final gadget as Graphviz");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : usage;
  }
  opts.dump_gadget = !dot_path.empty();

  try {
    dynrank::UpdateStream stream;
    if (input == "-") {
      stream = dynrank::parse_stream(std::cin);
    } else {
      std::ifstream in(input);
      if (!in) {
        std::cerr << "cannot open " << input << "\n";
        return usage;
      }
      stream = dynrank::parse_stream(in);
    }
    const dynrank::RunResult result = dynrank::run_stream(stream, opts);
    for (const auto& line : result.lines) std::cout << line << "\n";
    if (stats) {
      nlohmann::ordered_json j;
      for (const auto& [name, value] : result.counters) j[name] = value;
      std::cout << j.dump(2) << "\n";
    }
    if (opts.dump_gadget) {
      std::ofstream(dot_path) << result.gadget_dot;
    }
  } catch (const dynrank::Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.code());
  }
  return ok;
}
