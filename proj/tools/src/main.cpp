#include <iostream>

#include "rtdiff/cli/app.hpp"

int main(int argc, char** argv) {
  return rtdiff::cli::run_cli(argc, argv, std::cout, std::cerr);
}
