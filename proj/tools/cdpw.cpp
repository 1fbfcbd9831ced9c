#include <iostream>

#include "cdpw/cli.hpp"

int main(int argc, char** argv) { return cdpw::cli::run(argc, argv, std::cout, std::cerr); }
