#include "oujump/cli.hpp"

int main(int argc, char** argv) { return oujump::run_cli(argc, argv); }
