#pragma once

namespace stripent {

// Exit codes: 0 ok, 2 contract error, 3 resource guard, 4 selftest failure.
int run_cli(int argc, const char* const* argv);

} // namespace stripent
