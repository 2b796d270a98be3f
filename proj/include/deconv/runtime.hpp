#pragma once

namespace deconv::runtime {

/// Number of worker threads the parallel kernels may use.
/// Honors the DECONV_THREADS environment variable (values < 1 mean 1);
/// defaults to the OpenMP thread limit.
int max_threads();

/// True when max_threads() > 1 and OpenMP is compiled in.
bool parallel_enabled();

} // namespace deconv::runtime
