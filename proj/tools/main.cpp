#include <iostream>

#include "maxcon/cli.hpp"

int main(int argc, char **argv)
{
  return maxcon::cli::run(argc, argv, std::cout, std::cerr);
}
