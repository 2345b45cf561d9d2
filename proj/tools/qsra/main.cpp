#include "qsra/cli.hpp"

#include <iostream>

int
main(int argc, char** argv)
{
    return qsra::cli::run_cli(argc, argv, std::cout, std::cerr);
}
