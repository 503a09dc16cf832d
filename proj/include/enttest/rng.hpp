#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "enttest/matrix.hpp"

namespace enttest {

// Deterministic random source. Distributions are implemented directly on the
// raw 64-bit stream so that outputs do not depend on the standard library's
// distribution internals.
class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(seed) {}
    Rng(uint64_t seed, uint64_t stream) : gen_(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))) {}

    uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    cplx gauss_complex() { return cplx(gauss(), gauss()); }

    // Haar-like random unit vector of length n.
    std::vector<cplx> unit_vector(int n) {
        std::vector<cplx> v(n);
        double norm2 = 0;
        do {
            norm2 = 0;
            for (int i = 0; i < n; ++i) {
                v[i] = gauss_complex();
                norm2 += std::norm(v[i]);
            }
        } while (norm2 == 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& z : v) z *= inv;
        return v;
    }

    // Random density matrix with full rank (Wishart-style GG^dag, normalized).
    ComplexMatrix density_matrix(int n) {
        ComplexMatrix g(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = gauss_complex();
        ComplexMatrix rho = g * g.adjoint();
        const double tr = rho.trace().real();
        rho *= cplx(1.0 / tr, 0);
        return rho;
    }

    // Random Hermitian matrix with entries O(1).
    ComplexMatrix hermitian_matrix(int n) {
        ComplexMatrix h(n);
        for (int i = 0; i < n; ++i) {
            h(i, i) = uniform(-1, 1);
            for (int j = i + 1; j < n; ++j) {
                const cplx z(uniform(-1, 1), uniform(-1, 1));
                h(i, j) = z;
                h(j, i) = std::conj(z);
            }
        }
        return h;
    }

    // Probability vector with full support.
    std::vector<double> probability_vector(int n, double floor = 1e-3) {
        std::vector<double> p(n);
        double s = 0;
        for (int i = 0; i < n; ++i) {
            p[i] = floor + uniform();
            s += p[i];
        }
        for (double& x : p) x /= s;
        return p;
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace enttest
