#include <iostream>

#include "sslab/cli.hpp"

int main(int argc, char** argv) { return sslab::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
