#include <iostream>

#include "markerlr/cli.hpp"

int main(int argc, char **argv) {
  markerlr::RunConfig config;
  int code = 0;
  if (!markerlr::parse_command_line(argc, argv, config, code, std::cout, std::cerr)) return code;
  return markerlr::run(config, std::cout, std::cerr);
}
