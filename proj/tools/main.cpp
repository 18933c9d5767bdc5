#include "hbm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hbm::cli::run(argc, argv, std::cout, std::cerr); }
