#include <iostream>

#include "pnorm_tools/cli.hpp"

int main(int argc, char** argv) { return pnorm::cli::run(argc, argv, std::cout, std::cerr); }
