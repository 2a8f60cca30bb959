#include <string>
#include <vector>

#include "ptzeno/cli.hpp"

int main(int argc, char** argv) {
  return ptzeno::cli::main(std::vector<std::string>(argv + 1, argv + argc));
}
