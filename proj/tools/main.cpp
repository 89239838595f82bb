#include "sbgp/harness/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return sbgp::harness::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
