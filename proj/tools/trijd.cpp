#include "trijd/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return trijd::cli::run(argc, argv, std::cout, std::cerr);
}
