#include <iostream>
#include <string>
#include <vector>

#include "grantmine_cli/commands.h"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return grantmine::cli::RunCli(args, std::cout, std::cerr);
}
