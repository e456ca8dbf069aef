#include <iostream>
#include <string>
#include <vector>

#include "wcf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wcf::run_cli(args, std::cout, std::cerr);
}
