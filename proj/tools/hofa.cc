#include <iostream>
#include <string>
#include <vector>

#include "hofa/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hofa::run_cli(args, std::cout, std::cerr);
}
