#include <iostream>

#include "sumprod/cli.hpp"

int main(int argc, char** argv) {
  return sumprod::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
