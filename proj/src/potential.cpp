#include "bosegas/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bosegas/gauss.hpp"

namespace bosegas {

RadialPotential RadialPotential::barrier(double v0, double radius) {
    if (v0 < 0.0) throw std::invalid_argument("barrier potential: v0 must be >= 0");
    if (radius <= 0.0) throw std::invalid_argument("barrier potential: radius must be > 0");
    RadialPotential pot;
    pot.kind_ = Kind::barrier;
    pot.v0_ = v0;
    pot.range_ = radius;
    pot.l1_norm_ = 4.0 * M_PI / 3.0 * radius * radius * radius * v0;
    pot.breakpoints_ = {radius};
    return pot;
}

RadialPotential RadialPotential::tabulated(
    std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("tabulated potential: need at least 2 samples");
    RadialPotential pot;
    pot.kind_ = Kind::tabulated;
    double prev_r = -1.0;
    bool clamped = false, increased = false;
    for (auto& [r, v] : samples) {
        if (r < 0.0 || r <= prev_r)
            throw std::invalid_argument(
                "tabulated potential: radii must be >= 0 and strictly increasing");
        if (v < 0.0) {
            v = 0.0;
            clamped = true;
        }
        if (!pot.values_.empty() && v > pot.values_.back()) increased = true;
        pot.radii_.push_back(r);
        pot.values_.push_back(v);
        prev_r = r;
    }
    if (pot.values_.back() != 0.0)
        throw std::invalid_argument("tabulated potential: last sample must be 0");
    if (clamped)
        pot.warnings_.push_back("negative samples clamped to 0");
    if (increased)
        pot.warnings_.push_back("potential is not non-increasing in r");
    if (pot.radii_.front() > 0.0) {
        // Constant continuation down to r = 0.
        pot.radii_.insert(pot.radii_.begin(), 0.0);
        pot.values_.insert(pot.values_.begin(), pot.values_.front());
    }
    pot.range_ = pot.radii_.back();
    pot.breakpoints_ = pot.radii_;
    pot.l1_norm_ = 4.0 * M_PI *
                   gauss_panels([&pot](double r) { return pot(r) * r * r; },
                                pot.breakpoints_, 8);
    return pot;
}

RadialPotential RadialPotential::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open potential file: " + path);
    std::vector<std::pair<double, double>> samples;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double r, v;
        if (row >> r >> v) samples.emplace_back(r, v);
    }
    if (samples.empty())
        throw std::runtime_error("potential file has no samples: " + path);
    return tabulated(std::move(samples));
}

double RadialPotential::operator()(double r) const {
    if (r < 0.0) throw std::invalid_argument("potential: r must be >= 0");
    if (kind_ == Kind::barrier) return r <= range_ ? v0_ : 0.0;
    if (r >= range_) return 0.0;
    auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
    size_t hi = std::min<size_t>(it - radii_.begin(), radii_.size() - 1);
    size_t lo = hi - 1;
    double t = (r - radii_[lo]) / (radii_[hi] - radii_[lo]);
    return values_[lo] + t * (values_[hi] - values_[lo]);
}

RadialPotential RadialPotential::rescaled(double ell) const {
    if (ell <= 0.0) throw std::invalid_argument("rescaled: ell must be > 0");
    if (kind_ == Kind::barrier) return barrier(v0_ * ell * ell, range_ / ell);
    std::vector<std::pair<double, double>> samples;
    samples.reserve(radii_.size());
    for (size_t i = 0; i < radii_.size(); ++i)
        samples.emplace_back(radii_[i] / ell, values_[i] * ell * ell);
    RadialPotential pot = tabulated(std::move(samples));
    pot.warnings_ = warnings_;
    return pot;
}

}  // namespace bosegas
