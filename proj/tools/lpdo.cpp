#include <iostream>

#include "lpdo/cli.hpp"

int main(int argc, char** argv) {
  const auto o = lpdo::cli::run_args(std::vector<std::string>(argv + 1, argv + argc));
  std::cout << o.out;
  std::cerr << o.err;
  return o.code;
}
