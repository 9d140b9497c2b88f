#include "diskspec/cli.hpp"

int main(int argc, char** argv) { return diskspec::cli::run(argc, argv); }
