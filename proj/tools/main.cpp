#include <iostream>

#include "polyntt/cli.hpp"

int main(int argc, char** argv) {
  return polyntt::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
