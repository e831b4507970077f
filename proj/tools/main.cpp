#include "suploc/cli.hpp"

int main(int argc, char **argv) { return suploc::cli_main(argc, argv); }
