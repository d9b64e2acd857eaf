#include <string>
#include <vector>

#include "hems/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return hems::run_command(args);
}
