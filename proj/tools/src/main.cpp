#include <iostream>
#include <string>
#include <vector>

#include "heteroswitch/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return heteroswitch::cli::run(args, std::cout, std::cerr);
}
