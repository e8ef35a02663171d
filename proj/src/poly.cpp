#include "dynsheaf/poly.hpp"

#include "dynsheaf/errors.hpp"

#include <algorithm>
#include <cmath>

namespace dynsheaf {

std::uint64_t Rng::next_u64() {
    // splitmix64; identical output on every platform.
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

Cx Rng::unit_circle() {
    double t = uniform(0.0, 2.0 * M_PI);
    return Cx(std::cos(t), std::sin(t));
}

Poly Poly::monomial(int k, Cx v) {
    std::vector<Cx> c(k + 1, Cx(0));
    c[k] = v;
    return Poly(std::move(c));
}

Cx Poly::eval(Cx z) const {
    Cx r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + *it;
    return r;
}

Cx Poly::eval_homogeneous(Cx a, Cx b, int length) const {
    // sum_k c_k a^k b^(length-k), stable for |a| or |b| tiny.
    Cx r(0);
    Cx bp(1);
    std::vector<Cx> bpow(length + 1);
    for (int k = 0; k <= length; ++k) {
        bpow[k] = bp;
        bp *= b;
    }
    Cx ap(1);
    for (int k = 0; k <= length; ++k) {
        if (k < (int)c_.size()) r += c_[k] * ap * bpow[length - k];
        ap *= a;
    }
    return r;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Cx> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Poly(std::move(d));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Cx> r(std::max(c_.size(), o.c_.size()), Cx(0));
    for (size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
    for (size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const {
    std::vector<Cx> r(std::max(c_.size(), o.c_.size()), Cx(0));
    for (size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
    for (size_t k = 0; k < o.c_.size(); ++k) r[k] -= o.c_[k];
    return Poly(std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<Cx> r(c_.size() + o.c_.size() - 1, Cx(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(r));
}

Poly Poly::operator*(Cx s) const {
    std::vector<Cx> r(c_);
    for (auto& v : r) v *= s;
    return Poly(std::move(r));
}

Poly Poly::taylor_shift(Cx x0) const {
    // Repeated synthetic division by (z - x0); a[k] ends up as the k-th
    // coefficient of p(x0 + z).
    std::vector<Cx> a(c_);
    size_t n = a.size();
    for (size_t k = 0; k + 1 < n; ++k)
        for (size_t i = n - 1; i-- > k;) a[i] += x0 * a[i + 1];
    return Poly(std::move(a));
}

Poly Poly::reverse(int length) const {
    std::vector<Cx> r(length + 1, Cx(0));
    for (int k = 0; k <= length && k < (int)c_.size(); ++k) r[length - k] = c_[k];
    return Poly(std::move(r));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
    if (d.is_zero()) throw Error("DivisionByZeroPoly", "polynomial division by zero");
    if (degree() < d.degree()) return {Poly(), *this};
    std::vector<Cx> rem(c_);
    int dn = d.degree();
    Cx lead = d.c_.back();
    std::vector<Cx> q(degree() - dn + 1, Cx(0));
    for (int k = degree(); k >= dn; --k) {
        Cx f = rem[k] / lead;
        q[k - dn] = f;
        for (int i = 0; i <= dn; ++i) rem[k - dn + i] -= f * d.c_[i];
    }
    rem.resize(dn > 0 ? dn : 0);
    return {Poly(std::move(q)), Poly(std::move(rem))};
}

Poly Poly::compose(const Poly& g) const {
    Poly r;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * g + Poly::constant(*it);
    return r;
}

double Poly::max_abs_coeff() const {
    double m = 0;
    for (auto& v : c_) m = std::max(m, std::abs(v));
    return m;
}

void Poly::trim(double rel_eps) {
    double m = 0;
    for (auto& v : c_) m = std::max(m, std::abs(v));
    if (m == 0) {
        c_.clear();
        return;
    }
    while (!c_.empty() && std::abs(c_.back()) <= rel_eps * m) c_.pop_back();
}

JetSeries JetSeries::identity(int order) {
    JetSeries s = zero(order);
    if (order > 1) s.c[1] = Cx(1);
    return s;
}

JetSeries JetSeries::truncated(int order) const {
    JetSeries r = zero(order);
    for (int k = 0; k < order && k < (int)c.size(); ++k) r.c[k] = c[k];
    return r;
}

JetSeries JetSeries::operator+(const JetSeries& o) const {
    JetSeries r = truncated(std::min(order(), o.order()));
    for (int k = 0; k < r.order(); ++k) r.c[k] += o.c[k];
    return r;
}

JetSeries JetSeries::operator-(const JetSeries& o) const {
    JetSeries r = truncated(std::min(order(), o.order()));
    for (int k = 0; k < r.order(); ++k) r.c[k] -= o.c[k];
    return r;
}

JetSeries JetSeries::operator*(const JetSeries& o) const {
    int n = std::min(order(), o.order());
    JetSeries r = zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n && j < o.order(); ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
}

JetSeries JetSeries::scale(Cx s) const {
    JetSeries r = *this;
    for (auto& v : r.c) v *= s;
    return r;
}

JetSeries JetSeries::derivative() const {
    if (order() <= 1) return zero(0);
    JetSeries r = zero(order() - 1);
    for (int k = 1; k < order(); ++k) r.c[k - 1] = c[k] * static_cast<double>(k);
    return r;
}

JetSeries JetSeries::compose(const JetSeries& g) const {
    int n = std::min(order(), g.order());
    if (n > 0 && std::abs(g.coeff(0)) > 1e-12)
        throw Error("JetCompose", "inner series must vanish at 0");
    JetSeries r = zero(n);
    // Horner from the top coefficient down.
    for (int k = std::min<int>(order(), n) - 1; k >= 0; --k) {
        r = r * g.truncated(n);
        r.c[0] += c[k];
    }
    return r;
}

JetSeries JetSeries::reversion() const {
    int n = order();
    if (n < 2 || std::abs(c[0]) > 1e-12 || std::abs(c[1]) < 1e-300)
        throw Error("JetReversion", "series must be zero at 0 with invertible linear term");
    // Solve this(h) = id coefficient by coefficient.
    JetSeries h = zero(n);
    h.c[1] = Cx(1) / c[1];
    for (int k = 2; k < n; ++k) {
        JetSeries comp = compose(h);
        // comp currently equals id + e_k zeta^k + ...; kill the k-th term.
        Cx err = comp.coeff(k) - (k == 1 ? Cx(1) : Cx(0));
        h.c[k] -= err / c[1];
    }
    return h;
}

JetSeries JetSeries::from_rational(const Poly& a, const Poly& b, int order) {
    if (b.is_zero() || std::abs(b.coeff(0)) < 1e-300)
        throw Error("JetFromRational", "denominator vanishes at the center");
    JetSeries r = zero(order);
    Cx b0 = b.coeff(0);
    for (int k = 0; k < order; ++k) {
        Cx s = a.coeff(k);
        for (int j = 1; j <= k; ++j) s -= b.coeff(j) * r.c[k - j];
        r.c[k] = s / b0;
    }
    return r;
}

} // namespace dynsheaf
