#pragma once

namespace polya {

// Command-line entry point; returns the process exit status.
// 0 = success, 1 = numeric or verdict failure, 2 = usage error.
int cli_main(int argc, const char* const* argv);

} // namespace polya
