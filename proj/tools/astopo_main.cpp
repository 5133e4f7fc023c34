#include <iostream>

#include "astopo/cli.hpp"

int main(int argc, char** argv) { return astopo::cli_main(argc, argv, std::cout, std::cerr); }
