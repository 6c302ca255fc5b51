#include <iostream>
#include <string>
#include <vector>

#include "nwopt/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return nwopt::cli::run(args, std::cout, std::cerr);
}
