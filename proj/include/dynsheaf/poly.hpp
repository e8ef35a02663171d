#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace dynsheaf {

using Cx = std::complex<double>;

/// Shared numeric knobs. Keeping the seed fixed makes every downstream
/// computation reproducible bit for bit.
struct Tolerances {
    double eps_point = 1e-7;     // point identification radius (chordal metric)
    double eps_rank = 1e-8;      // singular value cutoff, relative to sigma_max
    double eps_residual = 1e-8;  // least squares fit acceptance
    int max_root_iterations = 400;
    std::uint64_t rng_seed = 20220901;
};

// Deterministic uniform randoms decoupled from libstdc++'s distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next_u64();
    double uniform();                     // [0,1)
    double uniform(double lo, double hi); // [lo,hi)
    Cx unit_circle();

private:
    std::uint64_t state_;
};

/// Dense polynomial over C, lowest degree first. The zero polynomial is the
/// empty coefficient list; nonzero polynomials keep a nonzero leading term.
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<Cx> cs) : c_(cs) { trim(); }
    explicit Poly(std::vector<Cx> cs) : c_(std::move(cs)) { trim(); }
    static Poly constant(Cx v) { return Poly({v}); }
    static Poly identity() { return Poly({Cx(0), Cx(1)}); } // z
    static Poly monomial(int k, Cx v = Cx(1));

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    const std::vector<Cx>& coeffs() const { return c_; }
    Cx coeff(int k) const { return k >= 0 && k < (int)c_.size() ? c_[k] : Cx(0); }
    Cx lead() const { return c_.empty() ? Cx(0) : c_.back(); }

    Cx eval(Cx z) const;
    // Homogeneous evaluation sum_k c_k a^k b^(L-k); L defaults to degree().
    Cx eval_homogeneous(Cx a, Cx b, int length) const;
    Poly derivative() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(Cx s) const;
    Poly operator-() const { return *this * Cx(-1); }

    /// Coefficients of p(x0 + z).
    Poly taylor_shift(Cx x0) const;
    /// z^length * p(1/z); pads with zeros when length > degree.
    Poly reverse(int length) const;
    /// Euclidean division; returns (quotient, remainder).
    std::pair<Poly, Poly> divmod(const Poly& d) const;
    /// p(g) for a polynomial argument (Horner on polynomials).
    Poly compose(const Poly& g) const;

    double max_abs_coeff() const;
    void trim(double rel_eps = 1e-13);

private:
    std::vector<Cx> c_;
};

/// Truncated power series used for local jets: value is sum c[i] zeta^i,
/// with every operation truncated at the series length.
struct JetSeries {
    std::vector<Cx> c; // length == truncation order

    int order() const { return static_cast<int>(c.size()); }
    Cx coeff(int k) const { return k >= 0 && k < (int)c.size() ? c[k] : Cx(0); }
    static JetSeries zero(int order) { return {std::vector<Cx>(order, Cx(0))}; }
    static JetSeries identity(int order);

    JetSeries truncated(int order) const;
    JetSeries operator+(const JetSeries& o) const;
    JetSeries operator-(const JetSeries& o) const;
    JetSeries operator*(const JetSeries& o) const;
    JetSeries scale(Cx s) const;
    JetSeries derivative() const; // one order shorter
    /// this(g) with g(0) == 0.
    JetSeries compose(const JetSeries& g) const;
    /// Compositional inverse h with this(h) = h(this) = id; requires c[0]=0, c[1]!=0.
    JetSeries reversion() const;
    /// Series of a(z)/b(z), b(0) != 0.
    static JetSeries from_rational(const Poly& a, const Poly& b, int order);
};

} // namespace dynsheaf
