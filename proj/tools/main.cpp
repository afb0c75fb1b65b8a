#include <iostream>

#include "pspt/cli.hpp"

int main(int argc, char** argv) {
  return pspt::run_cli(argc, argv, std::cout, std::cerr);
}
