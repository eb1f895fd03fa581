#include "lsketch/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "lsketch/error.hpp"
#include "lsketch/random.hpp"

namespace lsketch {

namespace {

constexpr double kJacobiTolerance = 1e-12;
constexpr int kJacobiMaxSweeps = 30;
constexpr double kPowerTolerance = 1e-6;
constexpr int kPowerMaxIterations = 1000;

// Householder factorization kept in compact form: R in the upper triangle of
// `work`, reflector vectors stored separately.
class Householder {
  public:
    explicit Householder(const DenseMatrix& a) : work_(a), taus_(a.cols(), 0.0) {
        require(a.rows() >= a.cols(), ErrorKind::InvalidArgument,
                "QR needs rows >= cols (overdetermined system)");
        const std::size_t n = a.rows();
        const std::size_t d = a.cols();
        reflectors_.reserve(d);
        for (std::size_t k = 0; k < d; ++k) {
            auto col = work_.col(k);
            const double alpha_norm = norm2(col.subspan(k));
            Vector v(col.begin() + static_cast<std::ptrdiff_t>(k), col.end());
            if (alpha_norm == 0.0) {
                reflectors_.push_back(std::move(v));
                continue;
            }
            const double alpha = col[k] >= 0.0 ? -alpha_norm : alpha_norm;
            v[0] -= alpha;
            const double vnorm = norm2(v);
            if (vnorm == 0.0) {
                reflectors_.push_back(std::move(v));
                col[k] = alpha;
                continue;
            }
            for (double& x : v) x /= vnorm;
            taus_[k] = 2.0;
            for (std::size_t j = k + 1; j < d; ++j) {
                auto cj = work_.col(j).subspan(k);
                double s = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * cj[i];
                s *= 2.0;
                for (std::size_t i = 0; i < v.size(); ++i) cj[i] -= s * v[i];
            }
            col[k] = alpha;
            for (std::size_t i = k + 1; i < n; ++i) col[i] = 0.0;
            reflectors_.push_back(std::move(v));
        }
    }

    void check_rank() const {
        const std::size_t d = work_.cols();
        double rmax = 0.0;
        for (std::size_t k = 0; k < d; ++k) rmax = std::max(rmax, std::abs(work_(k, k)));
        for (std::size_t k = 0; k < d; ++k) {
            if (rmax == 0.0 || std::abs(work_(k, k)) <= kRankTolerance * rmax) {
                raise(ErrorKind::RankDeficient,
                      "|R(" + std::to_string(k) + "," + std::to_string(k) +
                          ")| is below 1e-12 * max |R_jj|");
            }
        }
    }

    // Q^T x in place.
    void apply_qt(std::span<double> x) const {
        for (std::size_t k = 0; k < reflectors_.size(); ++k) reflect(k, x);
    }

    // Q x in place.
    void apply_q(std::span<double> x) const {
        for (std::size_t k = reflectors_.size(); k-- > 0;) reflect(k, x);
    }

    DenseMatrix r() const {
        const std::size_t d = work_.cols();
        DenseMatrix out(d, d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i <= j; ++i) out(i, j) = work_(i, j);
        return out;
    }

    DenseMatrix q_thin() const {
        const std::size_t n = work_.rows();
        const std::size_t d = work_.cols();
        DenseMatrix q(n, d);
        for (std::size_t j = 0; j < d; ++j) {
            auto c = q.col(j);
            c[j] = 1.0;
            apply_q(c);
        }
        return q;
    }

    // Solves R x = (Q^T b)[0:d].
    Vector solve(std::span<const double> b) const {
        Vector qtb(b.begin(), b.end());
        apply_qt(qtb);
        const std::size_t d = work_.cols();
        Vector x(d);
        for (std::size_t i = d; i-- > 0;) {
            double s = qtb[i];
            for (std::size_t j = i + 1; j < d; ++j) s -= work_(i, j) * x[j];
            x[i] = s / work_(i, i);
        }
        return x;
    }

  private:
    void reflect(std::size_t k, std::span<double> x) const {
        if (taus_[k] == 0.0) return;
        const Vector& v = reflectors_[k];
        auto tail = x.subspan(k);
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * tail[i];
        s *= taus_[k];
        for (std::size_t i = 0; i < v.size(); ++i) tail[i] -= s * v[i];
    }

    DenseMatrix work_;
    std::vector<double> taus_;
    std::vector<Vector> reflectors_;
};

double off_diagonal_norm(const DenseMatrix& g) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.cols(); ++j)
        for (std::size_t i = 0; i < g.rows(); ++i)
            if (i != j) s += g(i, j) * g(i, j);
    return std::sqrt(s);
}

void require_symmetric(const DenseMatrix& m, const char* who) {
    require(m.rows() == m.cols(), ErrorKind::DimensionMismatch, who);
    const double scale = std::max(1.0, max_abs(m.data()));
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (std::abs(m(i, j) - m(j, i)) > 1e-10 * scale)
                raise(ErrorKind::InvalidArgument, std::string(who) + ": matrix is not symmetric");
}

}  // namespace

QrFactors qr_factor(const DenseMatrix& a) {
    Householder h(a);
    h.check_rank();
    QrFactors f{h.q_thin(), h.r()};
    // Flip signs so that diag(R) >= 0; Q absorbs the matching column signs.
    for (std::size_t k = 0; k < a.cols(); ++k) {
        if (f.r_upper(k, k) < 0.0) {
            for (std::size_t j = k; j < a.cols(); ++j) f.r_upper(k, j) = -f.r_upper(k, j);
            for (double& x : f.q_thin.col(k)) x = -x;
        }
    }
    return f;
}

Vector solve_exact_ls(const DenseMatrix& a, std::span<const double> b) {
    require(b.size() == a.rows(), ErrorKind::DimensionMismatch, "solve_exact_ls: b length != rows");
    require(all_finite(b), ErrorKind::NonFinite, "solve_exact_ls: b has non-finite entries");
    Householder h(a);
    h.check_rank();
    return h.solve(b);
}

DenseMatrix orthonormal_basis(const DenseMatrix& a) { return qr_factor(a).q_thin; }

Vector symmetric_eigenvalues(const DenseMatrix& g_in) {
    require_symmetric(g_in, "symmetric_eigenvalues");
    DenseMatrix g = g_in;
    const std::size_t d = g.rows();
    const double threshold = kJacobiTolerance * g.frobenius_norm();

    int sweep = 0;
    while (off_diagonal_norm(g) > threshold) {
        if (sweep++ == kJacobiMaxSweeps) {
            raise(ErrorKind::ConvergenceFailure, "Jacobi did not converge in 30 sweeps");
        }
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double gpq = g(p, q);
                if (gpq == 0.0) continue;
                const double theta = (g(q, q) - g(p, p)) / (2.0 * gpq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // G <- J^T G J with J the (p,q) rotation.
                for (std::size_t k = 0; k < d; ++k) {
                    const double gkp = g(k, p);
                    const double gkq = g(k, q);
                    g(k, p) = c * gkp - s * gkq;
                    g(k, q) = s * gkp + c * gkq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double gpk = g(p, k);
                    const double gqk = g(q, k);
                    g(p, k) = c * gpk - s * gqk;
                    g(q, k) = s * gpk + c * gqk;
                }
                g(p, q) = 0.0;
                g(q, p) = 0.0;
            }
        }
    }

    Vector eig(d);
    for (std::size_t i = 0; i < d; ++i) eig[i] = g(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<>());
    return eig;
}

Vector gram_singular_values(const DenseMatrix& m) {
    require(m.rows() >= m.cols(), ErrorKind::InvalidArgument,
            "gram_singular_values needs rows >= cols");
    Vector sv = symmetric_eigenvalues(transpose_matmul(m, m));
    for (double& s : sv) s = std::sqrt(std::max(s, 0.0));
    return sv;
}

double spectral_norm_sym(const DenseMatrix& m, std::uint64_t seed) {
    require_symmetric(m, "spectral_norm_sym");
    const std::size_t n = m.rows();
    if (max_abs(m.data()) == 0.0) return 0.0;

    RandomStream rng(seed, "power-iteration");
    Vector v(n);
    for (double& x : v) x = rng.normal();
    const double v0 = norm2(v);
    for (double& x : v) x /= v0;

    // Stops once both the last increment of ||M v_k|| and the geometric tail
    // estimate step * rho / (1 - rho) fall below the relative tolerance.
    double estimate = 0.0;
    double last_step = 0.0;
    for (int it = 0; it < kPowerMaxIterations; ++it) {
        Vector w = matvec(m, v);
        const double next = norm2(w);
        if (next == 0.0) return 0.0;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / next;
        const double step = std::abs(next - estimate);
        if (it > 1) {
            if (step <= 1e-15 * next) return next;
            const double ratio = step / last_step;
            if (ratio < 1.0 && step <= kPowerTolerance * next &&
                step * ratio / (1.0 - ratio) <= kPowerTolerance * next) {
                return next;
            }
        }
        last_step = step;
        estimate = next;
    }
    raise(ErrorKind::ConvergenceFailure, "power iteration hit 1000 iterations");
}

Vector project_out(const DenseMatrix& u, std::span<const double> b) {
    require(b.size() == u.rows(), ErrorKind::DimensionMismatch, "project_out: b length != rows");
    const Vector coeffs = transpose_matvec(u, b);
    const Vector in_range = matvec(u, coeffs);
    return subtract(b, in_range);
}

double condition_number(const DenseMatrix& a) {
    const Vector sv = gram_singular_values(a);
    const double smax = sv.front();
    const double smin = sv.back();
    if (smax == 0.0 || smin <= kRankTolerance * smax) {
        raise(ErrorKind::RankDeficient, "sigma_min <= 1e-12 * sigma_max");
    }
    return smax / smin;
}

}  // namespace lsketch
