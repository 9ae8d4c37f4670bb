#include <iostream>

#include "gsemm_cli/cli.hpp"

int main(int argc, char** argv) {
  return gsemm::cli::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
