#include <iostream>

#include <permshape/cli.hpp>

int main(int argc, char** argv) { return permshape::cli::run(argc, argv, std::cout, std::cerr); }
