#include "petsim/cli.hpp"

int main(int argc, char** argv) { return petsim::cli::main(argc, argv); }
