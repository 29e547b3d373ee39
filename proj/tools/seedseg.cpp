#include <iostream>
#include <string>
#include <vector>

#include "seedseg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return seedseg::run_cli(args, std::cout, std::cerr);
}
