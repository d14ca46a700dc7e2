#include <iostream>
#include <string>
#include <vector>

#include "mime/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mime::cli::run(args, std::cout, std::cerr);
}
