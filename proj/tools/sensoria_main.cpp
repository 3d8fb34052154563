#include "sensoria/cli.hpp"

int main(int argc, char** argv) { return sensoria::cli::run(argc, argv); }
