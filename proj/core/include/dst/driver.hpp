#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dst {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // verification / typing failure
  kExitUsage = 2,    // usage or parse error
};

struct DriverOptions {
  bool json = false;
  bool color = false;
  size_t steps = 64;
  uint64_t seed = 0;
  size_t depth = 64;
  std::string proc;         // run/graph: process name override
  std::string global_name;  // subcommands over global types
  std::string role;
  std::string out_path;
  std::string impls;        // compose: "p=Proc,q=Proc"
  std::string homes;        // "p=w1,q=w2"
  std::string medium_domain;
  bool random_strategy = false;
};

int cmd_check(const std::string& file, const DriverOptions& o, std::ostream& out, std::ostream& err);
int cmd_run(const std::string& file, const DriverOptions& o, std::ostream& out, std::ostream& err);
int cmd_graph(const std::string& file, const DriverOptions& o, std::ostream& out, std::ostream& err);
int cmd_project(const std::string& file, const DriverOptions& o, std::ostream& out, std::ostream& err);
int cmd_wf(const std::string& file, const DriverOptions& o, std::ostream& out, std::ostream& err);
int cmd_medium(const std::string& file, const DriverOptions& o, std::ostream& out, std::ostream& err);
int cmd_verify_medium(const std::string& file, const DriverOptions& o, std::ostream& out, std::ostream& err);
int cmd_compose(const std::string& file, const DriverOptions& o, std::ostream& out, std::ostream& err);
int cmd_meta(const std::string& file, const DriverOptions& o, std::ostream& out, std::ostream& err);

}  // namespace dst
