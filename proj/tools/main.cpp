#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dst/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dst: domain-aware session types toolkit"};
  app.require_subcommand(1);

  dst::DriverOptions opts;
  if (const char* c = std::getenv("DST_COLOR")) opts.color = std::string(c) == "1";

  std::string file;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "input .dst file")->required();
    sub->add_flag("--json", opts.json, "machine-readable output");
    return sub;
  };

  auto* check = add_common(app.add_subcommand("check", "run all check directives"));
  auto* run = add_common(app.add_subcommand("run", "execute reductions"));
  run->add_option("--steps", opts.steps, "step budget");
  run->add_option("--seed", opts.seed, "random strategy seed");
  run->add_flag("--random", opts.random_strategy, "random reduction strategy");
  run->add_option("--proc", opts.proc, "process to run");
  auto* graph = add_common(app.add_subcommand("graph", "explore the reduction graph"));
  graph->add_option("--depth", opts.depth, "depth bound");
  graph->add_option("--proc", opts.proc, "process to explore");
  auto* project = add_common(app.add_subcommand("project", "project a global type"));
  project->add_option("--global", opts.global_name, "global type name (default: the file directive)");
  project->add_option("--role", opts.role, "participant (default: all)");
  auto* wf = add_common(app.add_subcommand("wf", "well-formedness of a global type"));
  wf->add_option("--global", opts.global_name, "global type name (default: the file directive)");
  wf->add_option("--homes", opts.homes, "participant home domains p=w,...");
  wf->add_option("--medium-domain", opts.medium_domain, "domain of the medium");
  auto* medium = add_common(app.add_subcommand("medium", "emit the medium process"));
  medium->add_option("--global", opts.global_name, "global type name (default: the file directive)");
  medium->add_option("--out", opts.out_path, "write to a file");
  medium->add_option("--homes", opts.homes, "participant home domains p=w,...");
  medium->add_option("--medium-domain", opts.medium_domain, "domain of the medium");
  auto* verify = add_common(app.add_subcommand("verify-medium", "type-check the medium"));
  verify->add_option("--global", opts.global_name, "global type name (default: the file directive)");
  verify->add_option("--homes", opts.homes, "participant home domains p=w,...");
  verify->add_option("--medium-domain", opts.medium_domain, "domain of the medium");
  auto* compose = add_common(app.add_subcommand("compose", "compose implementations with the medium"));
  compose->add_option("--global", opts.global_name, "global type name (default: the file directive)");
  compose->add_option("--impls", opts.impls, "participant implementations p=Proc,...");
  compose->add_option("--out", opts.out_path, "write to a file");
  compose->add_option("--homes", opts.homes, "participant home domains p=w,...");
  compose->add_option("--medium-domain", opts.medium_domain, "domain of the medium");
  auto* meta = add_common(app.add_subcommand("meta", "metatheory harness over check directives"));
  meta->add_option("--depth", opts.depth, "reduction graph depth bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : dst::kExitUsage;
  }

  try {
    if (check->parsed()) return dst::cmd_check(file, opts, std::cout, std::cerr);
    if (run->parsed()) return dst::cmd_run(file, opts, std::cout, std::cerr);
    if (graph->parsed()) return dst::cmd_graph(file, opts, std::cout, std::cerr);
    if (project->parsed()) return dst::cmd_project(file, opts, std::cout, std::cerr);
    if (wf->parsed()) return dst::cmd_wf(file, opts, std::cout, std::cerr);
    if (medium->parsed()) return dst::cmd_medium(file, opts, std::cout, std::cerr);
    if (verify->parsed()) return dst::cmd_verify_medium(file, opts, std::cout, std::cerr);
    if (compose->parsed()) return dst::cmd_compose(file, opts, std::cout, std::cerr);
    if (meta->parsed()) return dst::cmd_meta(file, opts, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dst::kExitUsage;
  }
  return dst::kExitUsage;
}
