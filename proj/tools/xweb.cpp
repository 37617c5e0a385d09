#include <iostream>

#include "xweb/cli.hpp"

int main(int argc, char** argv) { return xweb::run_cli(argc, argv, std::cout, std::cerr); }
