#include <iostream>

#include "jbessel/cli.hpp"

int main(int argc, char** argv) { return jbessel::run_cli(argc, argv, std::cout, std::cerr); }
