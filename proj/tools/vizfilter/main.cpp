#include <string>
#include <vector>

#include "vizfilter/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vizfilter::cli::run(args);
}
