#include "cli.hpp"

int main(int argc, char** argv) { return activecover::cli::run_main(argc, argv); }
