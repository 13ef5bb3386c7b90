#include <iostream>

#include "cbaco/service/cli.hpp"

int main(int argc, char** argv) {
  return cbaco::svc::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
