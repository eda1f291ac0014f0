#include "eqstates/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return eqs::run_cli(argc, argv, std::cout, std::cerr);
}
