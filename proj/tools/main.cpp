#include "symblend/app.hpp"

int main(int argc, char** argv) { return symblend::run_cli(argc, argv); }
