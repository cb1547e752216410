#include "pdeit/harness.hpp"

#include <cstdio>
#include <cstring>
#include <exception>
#include <string>

namespace {

int usage(const char* argv0) {
  std::fprintf(stderr,
               "usage: %s --config <path> --test {1,2} [--out <dir>]\n"
               "  --config  key=value experiment description\n"
               "  --test    1 = boundary trace comparison, 2 = conductivity reconstruction\n"
               "  --out     output directory (overrides the config's out key)\n",
               argv0);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::string config_path;
  std::string out_dir;
  int test = 0;

  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      config_path = argv[++i];
    } else if (arg == "--test" && i + 1 < argc) {
      test = std::atoi(argv[++i]);
    } else if (arg == "--out" && i + 1 < argc) {
      out_dir = argv[++i];
    } else {
      return usage(argv[0]);
    }
  }
  if (config_path.empty() || (test != 1 && test != 2)) return usage(argv[0]);

  try {
    pdeit::ExperimentConfig config = pdeit::load_config(config_path);
    if (!out_dir.empty()) config.out = out_dir;

    const pdeit::MetricsReport report = test == 1 ? pdeit::run_trace_comparison(config)
                                                  : pdeit::run_reconstruction(config);
    std::printf("manifest: %s\n", report.manifest_file.string().c_str());
    std::printf("residual checks: %s\n", report.checks_pass ? "pass" : "fail");
    return report.checks_pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
