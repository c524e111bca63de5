#include <iostream>
#include <string>
#include <vector>

#include "sarseg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sarseg::run_cli(args, std::cout, std::cerr);
}
