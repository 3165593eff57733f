#pragma once

#include <mutex>

namespace zkcyl::detail {

/// FFTW's planner is not thread-safe; every plan creation and destruction
/// goes through this mutex. Executing plans needs no lock.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace zkcyl::detail
