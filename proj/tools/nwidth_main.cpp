#include <iostream>

#include "nwidth/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nwidth::cli::run(args, std::cout, std::cerr);
}
