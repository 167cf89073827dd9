#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mfcli::dispatch(argc, argv, std::cout, std::cerr); }
