#include <iostream>
#include <string>
#include <vector>

#include "minicubes/experiments.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return minicubes::run_command(args, std::cout, std::cerr);
}
