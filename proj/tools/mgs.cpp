#include <iostream>

#include "mgs_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mgs::cli::run(args, std::cout, std::cerr);
}
