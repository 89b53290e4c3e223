#include <iostream>

#include "hypermatch/cli.hpp"

int main(int argc, char** argv) { return hypermatch::cli::run(argc, argv, std::cout, std::cerr); }
