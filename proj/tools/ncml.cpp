#include <iostream>

#include "ncml/cli.hpp"

int main(int argc, char** argv) { return ncml::run_cli(argc, argv, std::cout, std::cerr); }
