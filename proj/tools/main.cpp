#include <iostream>
#include <string>
#include <vector>

#include "vms/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return vms::cli::run(args, std::cout, std::cerr);
}
