#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cab/cli/workbench.hpp"
#include "cab/error.hpp"

namespace {

using namespace cab::cli;

struct Flags {
  WorkbenchConfig cfg;
  std::string suites;
  std::string window;
  std::string format = "json";
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--input,-i", f.cfg.inputs, "TOML structure definition (schema cabench.input/1)")->check(CLI::ExistingFile);
  sub->add_option("--preset,-p", f.cfg.preset, "Builtin preset");
  sub->add_option("--seed", f.cfg.seed, "Randomization seed (recorded in the report)");
  sub->add_option("--out,-o", f.cfg.out_dir, "Output directory (default: $CABENCH_OUT, else stdout)");
  sub->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"json", "text"}));
}

int emit(const std::string& command, const CommandResult& r, const Flags& f) {
  const std::string text = render(r.report, f.cfg.format);
  std::string dir = f.cfg.out_dir;
  if (dir.empty())
    if (const char* env = std::getenv("CABENCH_OUT")) dir = env;
  if (dir.empty()) {
    std::cout << text;
    return r.exit_code;
  }
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / (command + (f.cfg.format == Format::Json ? ".json" : ".txt"));
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw cab::ParseError("cannot write " + path.string());
  std::cout << command << ": " << (r.exit_code == kOk ? "ok" : "FAILED") << " -> " << path.string() << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification workbench for Courant-type algebroids, Lenard hierarchies and loop flows"};
  app.require_subcommand(1);
  Flags f;

  bool suites_given = false;
  CLI::App* verify = app.add_subcommand("verify", "Run verification suites");
  add_common(verify, f);
  verify->add_option("--suite", f.suites, "Comma-separated: courant, semidirect, algebroid, lenard, or none")
      ->each([&](const std::string&) { suites_given = true; });
  verify->add_option("--mode-radius", f.cfg.mode_radius, "Fourier/monomial radius of random instances")->check(CLI::NonNegativeNumber);
  verify->add_option("--instances", f.cfg.instances, "Random instances per identity")->check(CLI::PositiveNumber);

  CLI::App* hierarchy = app.add_subcommand("hierarchy", "Build and certify a Lenard hierarchy");
  add_common(hierarchy, f);

  CLI::App* flow = app.add_subcommand("flow", "Integrate a Casimir flow on the loop dual");
  add_common(flow, f);
  flow->add_option("--window", f.window, "Truncation window radius:lo:hi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    f.cfg.format = f.format == "text" ? Format::Text : Format::Json;
    if (suites_given) f.cfg.suites = parse_suites(f.suites);
    if (!f.window.empty()) f.cfg.window = parse_window(f.window);
    if (verify->parsed()) return emit("verify", cmd_verify(f.cfg), f);
    if (hierarchy->parsed()) return emit("hierarchy", cmd_hierarchy(f.cfg), f);
    return emit("flow", cmd_flow(f.cfg), f);
  } catch (const cab::ParseError& e) {
    std::cerr << "cabench: input error: " << e.what() << "\n";
    return kInputError;
  } catch (const cab::DomainError& e) {
    std::cerr << "cabench: input error: " << e.what() << "\n";
    return kInputError;
  } catch (const cab::DimensionMismatch& e) {
    std::cerr << "cabench: input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "cabench: " << e.what() << "\n";
    return kFailed;
  }
}
