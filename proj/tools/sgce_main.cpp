#include <iostream>

#include "sgce/cli.hpp"

int main(int argc, char** argv) { return sgce::run_cli(argc, argv, std::cout, std::cerr); }
