#include <iostream>

#include "mvlsw/cli.hpp"

int main(int argc, char** argv) { return mvlsw::run_cli(argc, argv, std::cout, std::cerr); }
