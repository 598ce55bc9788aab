#pragma once

namespace pfde::parallel {

// Worker cap: min(PFDE_THREADS, hardware) when the env var is set, else the
// OpenMP default. Call once near program start; safe to call again.
void configure_from_env();

// Force a specific worker count (tests use 1 to pin the serial reference).
void set_workers(int count);

int workers();

// When false, all parallel kernels take their serial path. Tests flip this to
// compare the OpenMP kernels against the serial reference.
void set_enabled(bool on);
bool enabled();

}  // namespace pfde::parallel
