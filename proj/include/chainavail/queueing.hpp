#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace chainavail {

// Mean delay in seconds, or Unavailable (+infinity) when a state cannot
// serve a tenant at all. IEEE infinity gives exactly the required algebra:
// it absorbs addition and never satisfies a finite threshold.
using DelayValue = double;

inline constexpr DelayValue kUnavailable = std::numeric_limits<double>::infinity();

inline bool is_unavailable(DelayValue d) { return std::isinf(d); }

struct ServiceStats {
    double mean_service_time = 0.0;  // 1/beta, seconds
    double cv_service = 0.0;         // coefficient of variation of service times
};

struct UnstableQueueError : std::domain_error {
    using std::domain_error::domain_error;
};

// Mean number of jobs in an M/M/c system, computed with a stable recurrence
// (no explicit factorials). Throws UnstableQueueError when rho >= 1.
double erlang_c_mean_jobs(double alpha, double beta, int c);

// Mean sojourn time E[d] = E[nu]/alpha.
double mean_sojourn(double alpha, double beta, int c);

// Kingman-style M/G/c mean delay: the full mean sojourn scaled by
// (cv_arrivals^2 + cv_service^2)/2. Zero servers or an overloaded queue
// yield Unavailable.
DelayValue kingman_mean_delay(double alpha, const ServiceStats& svc, long long c,
                              double cv_arrivals = 1.0);

}  // namespace chainavail
