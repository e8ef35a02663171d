#include "dynsheaf/roots.hpp"

#include "dynsheaf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <utility>

namespace dynsheaf {

namespace {

// Horner evaluation of p and p' in one pass.
std::pair<Cx, Cx> eval_with_derivative(const Poly& p, Cx z) {
    Cx v(0), d(0);
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        d = d * z + v;
        v = v * z + *it;
    }
    return {v, d};
}

double root_radius_bound(const Poly& p) {
    // Cauchy bound: 1 + max |c_k/c_n|.
    double m = 0;
    const auto& c = p.coeffs();
    double lead = std::abs(c.back());
    for (size_t k = 0; k + 1 < c.size(); ++k) m = std::max(m, std::abs(c[k]) / lead);
    return 1.0 + m;
}

} // namespace

std::vector<RootCluster> roots_with_multiplicity(const Poly& p, const Tolerances& tol) {
    if (p.is_zero()) throw PreconditionViolation("roots of the zero polynomial");
    int n = p.degree();
    if (n == 0) return {};

    // Deflate exact zero roots at the origin first; they are common (fibers
    // through critical points) and cost accuracy if left to the iteration.
    Poly q = p;
    int zero_mult = 0;
    {
        const double scale = p.max_abs_coeff();
        auto c = p.coeffs();
        while ((int)c.size() > 1 && std::abs(c.front()) <= 1e-14 * scale) {
            c.erase(c.begin());
            ++zero_mult;
        }
        q = Poly(std::move(c));
    }
    int m = q.degree();

    std::vector<Cx> z(m);
    Rng rng(tol.rng_seed ^ 0x5eedu);
    double R = std::max(0.5, 0.8 * root_radius_bound(q));
    for (int i = 0; i < m; ++i) {
        double theta = 2 * M_PI * (i + 0.35) / std::max(1, m) + 0.1 * rng.uniform();
        z[i] = R * Cx(std::cos(theta), std::sin(theta)) * (1.0 + 0.05 * rng.uniform());
    }

    // Aberth-Ehrlich sweeps.
    bool converged = m == 0;
    for (int iter = 0; iter < tol.max_root_iterations && !converged; ++iter) {
        double worst = 0;
        for (int i = 0; i < m; ++i) {
            auto [v, d] = eval_with_derivative(q, z[i]);
            if (v == Cx(0)) continue;
            Cx newton = (d != Cx(0)) ? v / d : v;
            Cx rep(0);
            for (int j = 0; j < m; ++j)
                if (j != i) rep += Cx(1) / (z[i] - z[j]);
            Cx denom = Cx(1) - newton * rep;
            Cx step = (std::abs(denom) > 1e-300) ? newton / denom : newton;
            z[i] -= step;
            worst = std::max(worst, std::abs(step) / std::max(1.0, std::abs(z[i])));
        }
        converged = worst < 1e-14;
    }
    if (!converged) {
        // Accept when every residual is at the noise floor of Horner
        // evaluation, i.e. small against sum_k |c_k| |z|^k.
        double worst = 0;
        for (int i = 0; i < m; ++i) {
            double floor_scale = 0, zp = 1, az = std::abs(z[i]);
            for (auto& c : q.coeffs()) {
                floor_scale += std::abs(c) * zp;
                zp *= az;
            }
            worst = std::max(worst, std::abs(q.eval(z[i])) / std::max(floor_scale, 1e-300));
        }
        if (worst > 1e-10) {
            std::ostringstream os;
            os << "root iteration stalled, backward error " << worst;
            throw NonConvergence(os.str());
        }
    }

    // Inclusion radii a la Durand-Kerner: r_i = m * |q(z_i)| / |lead * prod (z_i - z_j)|.
    std::vector<double> radius(m, 0.0);
    double lead = std::abs(q.lead());
    for (int i = 0; i < m; ++i) {
        double prod = 1;
        for (int j = 0; j < m; ++j)
            if (j != i) prod *= std::abs(z[i] - z[j]);
        double denom = lead * prod;
        radius[i] = denom > 1e-300 ? m * std::abs(q.eval(z[i])) / denom : 1e300;
        radius[i] = std::max(radius[i], 1e-15 * std::max(1.0, std::abs(z[i])));
    }

    // Single linkage: connect when separation is inside the joint inclusion
    // radius or under the point-identification radius.
    std::vector<int> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            double sep = std::abs(z[i] - z[j]);
            double r = 4 * (radius[i] + radius[j]) +
                       tol.eps_point * std::max(1.0, std::abs(z[i]));
            if (sep <= r) parent[find(i)] = find(j);
        }

    std::vector<RootCluster> out;
    std::vector<char> done(m, 0);
    for (int i = 0; i < m; ++i) {
        int r = find(i);
        if (done[r]) continue;
        done[r] = 1;
        Cx sum(0);
        int count = 0;
        for (int j = 0; j < m; ++j)
            if (find(j) == r) {
                sum += z[j];
                ++count;
            }
        Cx center = sum / static_cast<double>(count);
        // Polish an m-fold root as a simple root of the (m-1)-th derivative.
        if (count > 1) {
            Poly d = q;
            for (int k = 1; k < count; ++k) d = d.derivative();
            Cx x = center;
            for (int it = 0; it < 20; ++it) {
                auto [v, dv] = eval_with_derivative(d, x);
                if (std::abs(dv) < 1e-300) break;
                Cx step = v / dv;
                x -= step;
                if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
            }
            if (std::abs(x - center) < 4 * (radius[i] + 1e-12)) center = x;
        } else {
            // One extra Newton step on q keeps simple roots at full accuracy.
            auto [v, dv] = eval_with_derivative(q, center);
            if (std::abs(dv) > 1e-300) center -= v / dv;
        }
        out.push_back({center, count});
    }
    if (zero_mult > 0) out.push_back({Cx(0), zero_mult});

    // Merge anything that collapsed onto the deflated origin root.
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = i + 1; j < out.size();) {
            if (std::abs(out[i].value - out[j].value) <
                tol.eps_point * std::max(1.0, std::abs(out[i].value))) {
                out[i].multiplicity += out[j].multiplicity;
                out.erase(out.begin() + j);
            } else {
                ++j;
            }
        }

    std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    int total = 0;
    for (auto& rc : out) total += rc.multiplicity;
    if (total != n)
        throw NonConvergence("root multiplicities sum to " + std::to_string(total) +
                             ", expected " + std::to_string(n));
    return out;
}

} // namespace dynsheaf
