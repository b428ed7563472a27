#include <string>
#include <vector>

#include "qdistill/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qdistill::run_cli(args);
}
