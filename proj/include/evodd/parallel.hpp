#pragma once

namespace evodd {

/// Kernel execution policy. `serial` runs the plain loop kept as the reference
/// for the OpenMP kernels; `parallel` distributes the outer loop across workers.
enum class Exec { serial, parallel };

/// Number of OpenMP workers currently in use (1 when built without OpenMP).
int worker_count();
void set_worker_count(int n);

/// Applies EVODD_WORKERS if set. Returns the effective worker count.
int configure_workers_from_env();

}  // namespace evodd
