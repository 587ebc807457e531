#include <iostream>

#include "intstbc/cli.hpp"

int main(int argc, char** argv)
{
    return intstbc::run_cli(argc, argv, std::cout, std::cerr);
}
