#include "qsemis/cli.hpp"

int main(int argc, char** argv) { return qsemis::run_cli(argc, argv); }
