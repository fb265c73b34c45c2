#include <iostream>

#include "shelab/cli.hpp"

int main(int argc, char** argv) { return shelab::run_cli(argc, argv, std::cout, std::cerr); }
