#include <iostream>

#include "esav/cli.hpp"

int main(int argc, char** argv) { return esav::run_cli(argc, argv, std::cout, std::cerr); }
