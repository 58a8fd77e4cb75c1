#include <iostream>

#include "lmm/harness.hpp"

int main(int argc, char** argv) { return lmm::run_cli(argc, argv, std::cout, std::cerr); }
