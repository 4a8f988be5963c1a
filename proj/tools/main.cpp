#include <iostream>

#include "pixelstorm/cli.hpp"

int main(int argc, char** argv) {
  return pixelstorm::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
