#include <iostream>

#include "xlradr/cli/commands.h"

int main(int argc, char** argv) { return xlradr::RunCli(argc, argv, std::cout, std::cerr); }
