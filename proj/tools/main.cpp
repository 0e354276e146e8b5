#include <iostream>
#include <string>
#include <vector>

#include "strkit/cli.hpp"

int main(int argc, char** argv) {
  try {
    return strkit::run_cli(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 1;
  }
}
