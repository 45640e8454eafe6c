#pragma once

#include <mutex>

namespace holodepth::holo {

/// Serialises FFTW plan creation/destruction across the library.
std::mutex& fftw_planner_mutex();

}  // namespace holodepth::holo
