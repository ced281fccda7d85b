#pragma once

namespace polyton {

/// Caps OpenMP worker threads; values below 1 restore the runtime default.
void set_thread_count(int threads);
int thread_count();

/// Reads POLYTON_THREADS and applies it when set to a positive integer.
void apply_thread_env();

}  // namespace polyton
