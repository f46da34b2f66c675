#include "bibasis/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return bibasis::run_cli(argc, argv, std::cout, std::cerr);
}
