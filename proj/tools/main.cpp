#include "hardpair/cli.hpp"

int main(int argc, char** argv) { return hardpair::run_cli(argc, argv); }
