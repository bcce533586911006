#include "tpval/cli/cli.hpp"

int main(int argc, char** argv) { return tpval::cli::run(argc, argv); }
