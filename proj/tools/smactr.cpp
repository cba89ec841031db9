#include <iostream>

#include "smactr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return smactr::run_cli(args, std::cout, std::cerr);
}
