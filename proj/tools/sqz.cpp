#include <CLI11.hpp>
#include <iostream>

#include "sqz/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sqz: atom-cavity number-phase squeezing simulations"};
  std::string command, config, out = "out", format = "csv";
  int threads = 0;
  bool deterministic = false, keys = false;
  app.add_option("command", command, "one of: " + [] {
    std::string s;
    for (const auto& c : sqz::cli::commands()) s += (s.empty() ? "" : ", ") + c;
    return s;
  }());
  app.add_option("--config", config, "flat key = value file");
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "worker threads; 0 uses the hardware count")->check(CLI::NonNegativeNumber);
  // Every computation is deterministic; the flag is accepted for scripted runs.
  app.add_flag("--seedless-deterministic", deterministic, "no-op: no random numbers are drawn");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--list-keys", keys, "print the configuration reference and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : sqz::cli::kParseError;
  }
  if (keys) {
    for (const auto& k : sqz::cli::config_reference())
      std::cout << k.key << " (" << k.type << ", default " << (k.fallback.empty() ? "empty" : k.fallback) << "): " << k.doc
                << "\n";
    return 0;
  }
  if (command.empty()) {
    std::cerr << app.help();
    return sqz::cli::kParseError;
  }
  return sqz::cli::run(command, config, out, threads, format);
}
