#include "cmtk/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return cmtk::run_cli(argc, argv, std::cout, std::cerr); }
