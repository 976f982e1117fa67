#include "peakrisk/riskstats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace peakrisk::risk {

double tail_constant(double eps, TailKind kind) {
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("tail_constant: eps must be in (0,1)");
    switch (kind) {
        case TailKind::Cantelli:
            return std::sqrt(1.0 / eps - 1.0);
        case TailKind::VysochanskijPetunin:
            if (eps > 1.0 / 6.0)
                throw std::invalid_argument("tail_constant: VP bound requires eps <= 1/6");
            return std::sqrt(4.0 / (9.0 * eps) - 1.0);
    }
    throw std::logic_error("tail_constant: unknown kind");
}

double tail_bound(double mean, double sigma, double eps, TailKind kind) {
    if (sigma < 0.0) throw std::invalid_argument("tail_bound: sigma must be >= 0");
    return mean + tail_constant(eps, kind) * sigma;
}

namespace {

std::vector<double> sorted_descending(const EmpiricalDistribution& d) {
    if (d.samples.empty()) throw std::invalid_argument("empirical statistic: empty sample set");
    std::vector<double> s = d.samples;
    std::sort(s.begin(), s.end(), std::greater<double>());
    return s;
}

}  // namespace

double empirical_var(const EmpiricalDistribution& d, double eps) {
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("empirical_var: eps must be in (0,1)");
    std::vector<double> s = sorted_descending(d);
    auto n = static_cast<double>(s.size());
    auto k = static_cast<size_t>(std::ceil(n * eps));
    k = std::max<size_t>(1, std::min(k, s.size()));
    return s[k - 1];
}

double empirical_es(const EmpiricalDistribution& d, double eps) {
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("empirical_es: eps must be in (0,1)");
    std::vector<double> s = sorted_descending(d);
    const double n_eps = static_cast<double>(s.size()) * eps;
    auto whole = static_cast<size_t>(std::floor(n_eps));
    whole = std::min(whole, s.size());
    double acc = 0.0;
    for (size_t i = 0; i < whole; ++i) acc += s[i];
    const double frac = n_eps - static_cast<double>(whole);
    if (frac > 0.0 && whole < s.size()) acc += frac * s[whole];
    return acc / n_eps;
}

}  // namespace peakrisk::risk
