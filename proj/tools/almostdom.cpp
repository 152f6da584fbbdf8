#include <iostream>

#include "almostdom/cli.hpp"

int main(int argc, char** argv) { return almostdom::run_cli(argc, argv, std::cout, std::cerr); }
