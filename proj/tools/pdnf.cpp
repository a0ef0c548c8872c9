#include <iostream>
#include <string>
#include <vector>

#include "pdnf/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pdnf::run_command(args, std::cout, std::cerr);
}
