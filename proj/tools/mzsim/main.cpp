#include <iostream>
#include <string>
#include <vector>

#include "mzsim/runner.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mzsim::run_cli(args, std::cout, std::cerr);
}
