#include "ktuple/cli.hpp"

int main(int argc, char** argv) { return ktuple::cli::run_cli(argc, argv); }
