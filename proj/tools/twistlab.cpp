// twistlab driver.  One subcommand per process; everything else lives in
// run_command so tests can invoke commands in-process.

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "twistlab/commands.hpp"
#include "twistlab/config.hpp"
#include "twistlab/errors.hpp"

int main(int argc, char **argv) {
  CLI::App app{"planar elastic minimization and twist/regularity diagnostics"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  long long seed = -1;
  int threads = 0;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "override config seed");
  app.add_option("--threads", threads, "override config thread count");

  const char *names[] = {"build-law",  "minimize", "twist-report", "star-check",
                         "holder-fit", "shear",    "verify"};
  for (const char *n : names) app.add_subcommand(n)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    twistlab::RunConfig cfg;
    if (!config_path.empty()) cfg = twistlab::load_config(config_path);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (threads > 0) cfg.threads = threads;
    const std::string cmd = app.get_subcommands().front()->get_name();
    return twistlab::run_command(cmd, cfg, out_dir);
  } catch (const twistlab::Error &err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
}
