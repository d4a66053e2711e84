#include "cli.hpp"

int main(int argc, char** argv) { return permafinetti::cli::run(argc, argv); }
