#include <iostream>

#include "axplore/cli.hpp"

int main(int argc, char** argv) { return axplore::cli::run(argc, argv, std::cout, std::cerr); }
