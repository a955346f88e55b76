#include <iostream>

#include "hvlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hvlab::cli::run(args, std::cout, std::cerr);
}
