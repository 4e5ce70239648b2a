#include "geoflow/cli.hpp"

int main(int argc, char** argv) { return geoflow::cli::main(argc, argv); }
