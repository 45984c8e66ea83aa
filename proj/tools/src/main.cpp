#include "qekr/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return qekr::cli::run(argc, argv, std::cout, std::cerr); }
