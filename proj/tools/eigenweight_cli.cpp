#include "cli_app.hpp"

int main(int argc, char** argv) { return eigenweight::cli::run(argc, argv); }
