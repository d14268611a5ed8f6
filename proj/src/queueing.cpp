#include "chainavail/queueing.hpp"

namespace chainavail {

double erlang_c_mean_jobs(double alpha, double beta, int c) {
    if (alpha <= 0 || beta <= 0) throw UnstableQueueError("erlang_c: rates must be positive");
    if (c < 1) throw UnstableQueueError("erlang_c: at least one server required");
    const double a = alpha / beta;  // offered load c*rho
    const double rho = a / c;
    if (rho >= 1.0) throw UnstableQueueError("erlang_c: utilization >= 1");

    // r accumulates sum_{k=0..c-1} a^k/k! scaled by (c-1)!/a^(c-1), built
    // backwards so each step multiplies by a bounded ratio (no factorials).
    double r = 1.0;
    for (int h = 0; h + 1 < c; ++h) r = 1.0 + r * (h + 1) / a;
    const double wait_prob = 1.0 / (1.0 + (1.0 - rho) * r * c / a);
    return a + wait_prob * rho / (1.0 - rho);
}

double mean_sojourn(double alpha, double beta, int c) {
    return erlang_c_mean_jobs(alpha, beta, c) / alpha;
}

DelayValue kingman_mean_delay(double alpha, const ServiceStats& svc, long long c,
                              double cv_arrivals) {
    if (c <= 0) return kUnavailable;
    const double beta = 1.0 / svc.mean_service_time;
    if (alpha / beta >= static_cast<double>(c)) return kUnavailable;
    const double correction =
        (cv_arrivals * cv_arrivals + svc.cv_service * svc.cv_service) / 2.0;
    return mean_sojourn(alpha, beta, static_cast<int>(c)) * correction;
}

}  // namespace chainavail
