// Runs the acceptance battery and prints one line per criterion.
#include <cstdlib>
#include <iostream>
#include <string>

#include "hypermatch/acceptance.hpp"

int main(int argc, char** argv) {
  hypermatch::acceptance::Options opt;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--jobs" && i + 1 < argc) {
      opt.jobs = std::stoul(argv[++i]);
    } else if (arg == "--seed" && i + 1 < argc) {
      opt.seed = std::stoull(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--jobs N] [--seed S]\n";
      return 2;
    }
  }
  bool all = true;
  for (const auto& criterion : hypermatch::acceptance::criteria()) {
    const auto result = criterion(opt);
    std::cout << hypermatch::acceptance::format_line(result) << std::endl;
    all = all && result.passed;
  }
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
