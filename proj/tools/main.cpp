#include <iostream>

#include "combisb/cli.hpp"

int main(int argc, char** argv) { return combisb::run_cli(argc, argv, std::cout, std::cerr); }
