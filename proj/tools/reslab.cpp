// SPDX-License-Identifier: Apache-2.0
//
// reslab: resonance spectroscopy of an open quantum billiard and its
// schematic two-level reductions.
//
//   reslab run --config <path> [--out <dir>] [--threads N]
//   reslab validate --config <path>
//
// Exit codes: 0 success, 1 config/validation error, 2 solver or I/O error.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "reslab/config.hpp"
#include "reslab/emit.hpp"

namespace
{

std::string read_text_file(const std::string& path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw reslab::IoError("cannot read config file " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"resonance spectroscopy of an open rectangular billiard"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int threads = 1;

  CLI::App* run = app.add_subcommand("run", "execute a config and write result files");
  run->add_option("--config", config_path, "config file (key = value lines)")->required();
  run->add_option("--out", out_dir, "output directory (default: current directory)");
  run->add_option("--threads", threads,
                  "worker thread budget (the solver chain is sequential; accepted "
                  "for compatibility)")
      ->envname("RESLAB_THREADS");

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a config");
  validate->add_option("--config", config_path, "config file (key = value lines)")
      ->required();

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1; // command-line usage problems are user errors
  }

  try
  {
    if (threads < 1)
      throw reslab::ValidationError("threads", "must be at least 1");

    const reslab::RunConfig cfg = reslab::parse_config(read_text_file(config_path));

    if (validate->parsed())
    {
      std::cout << "ok: mode = " << reslab::to_string(cfg.mode) << "\n";
      return 0;
    }

    const reslab::RunOutput out = reslab::execute(cfg);
    const std::vector<std::string> files = reslab::emit_results(out, cfg, out_dir);
    for (const std::string& f : files)
      std::cout << f << "\n";
    return 0;
  }
  catch (const reslab::ParseError& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  catch (const reslab::ValidationError& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  catch (const reslab::Error& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
