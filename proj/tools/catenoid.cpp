#include <catenoid/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return catenoid::cli::main(argc, argv, std::cout, std::cerr); }
