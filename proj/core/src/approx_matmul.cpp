#include "lsketch/approx_matmul.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsketch/error.hpp"
#include "lsketch/linalg.hpp"
#include "lsketch/random.hpp"

namespace lsketch {

namespace {

Vector column_norms_sq(const DenseMatrix& a) {
    Vector out(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const double nj = norm2(a.col(j));
        out[j] = nj * nj;
    }
    return out;
}

}  // namespace

Vector column_probabilities(const DenseMatrix& a) {
    Vector p = column_norms_sq(a);
    double total = 0.0;
    for (double v : p) total += v;
    require(total > 0.0, ErrorKind::ZeroMatrix, "column probabilities need a nonzero matrix");
    for (double& v : p) v /= total;
    return p;
}

Vector uniform_probabilities(const DenseMatrix& a) {
    return Vector(a.cols(), 1.0 / static_cast<double>(a.cols()));
}

double effective_beta(const DenseMatrix& a, std::span<const double> probs) {
    require(probs.size() == a.cols(), ErrorKind::DimensionMismatch,
            "effective_beta: one probability per column");
    const Vector ns = column_norms_sq(a);
    double total = 0.0;
    for (double v : ns) total += v;
    require(total > 0.0, ErrorKind::ZeroMatrix, "effective_beta needs a nonzero matrix");
    double beta = 1.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (ns[i] > 0.0) beta = std::min(beta, probs[i] * total / ns[i]);
    }
    return beta;
}

ColumnSampler::ColumnSampler(const DenseMatrix& a, Vector probs, std::size_t c, double beta)
    : probs_(std::move(probs)), c_(c), beta_(beta) {
    require(probs_.size() == a.cols(), ErrorKind::DimensionMismatch,
            "sampler needs one probability per column");
    require(c >= 1, ErrorKind::InvalidArgument, "sampler needs c >= 1");
    require(beta > 0.0 && beta <= 1.0, ErrorKind::InvalidArgument, "beta must lie in (0, 1]");
    double sum = 0.0;
    for (double p : probs_) {
        require(p >= 0.0 && std::isfinite(p), ErrorKind::InvalidArgument,
                "probabilities must be finite and nonnegative");
        sum += p;
    }
    require(std::abs(sum - 1.0) <= 1e-12, ErrorKind::InvalidArgument,
            "probabilities must sum to 1 within 1e-12");

    const Vector ns = column_norms_sq(a);
    double total = 0.0;
    for (double v : ns) total += v;
    require(total > 0.0, ErrorKind::ZeroMatrix, "sampler needs a nonzero matrix");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        // Relative slack covers rounding in p_i computed as ns_i / total.
        if (probs_[i] < beta * ns[i] / total * (1.0 - 1e-12)) {
            raise(ErrorKind::InvalidArgument,
                  "p_" + std::to_string(i) + " violates the floor beta ||A^(i)||^2 / ||A||_F^2");
        }
        if (probs_[i] > 0.0)
            max_scaled_norm_ = std::max(max_scaled_norm_, std::sqrt(ns[i] / probs_[i]));
    }

    cumulative_.resize(probs_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        acc += probs_[i];
        cumulative_[i] = acc;
    }
}

std::size_t ColumnSampler::draw(double u) const noexcept {
    const double target = u * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end()) {
        // u * total rounded onto the last boundary; take the last column with mass.
        std::size_t i = cumulative_.size() - 1;
        while (i > 0 && probs_[i] == 0.0) --i;
        return i;
    }
    return static_cast<std::size_t>(it - cumulative_.begin());
}

ColumnSampler norm_squared_sampler(const DenseMatrix& a, std::size_t c) {
    return ColumnSampler(a, column_probabilities(a), c, 1.0);
}

std::vector<std::size_t> draw_column_indices(const ColumnSampler& sampler, std::uint64_t seed) {
    RandomStream rng(seed, "exactly-c");
    std::vector<std::size_t> idx(sampler.c());
    for (auto& i : idx) i = sampler.draw(rng.uniform());
    return idx;
}

DenseMatrix exactly_c(const DenseMatrix& a, const ColumnSampler& sampler, std::uint64_t seed) {
    require(sampler.probs().size() == a.cols(), ErrorKind::DimensionMismatch,
            "exactly_c: sampler built for a different column count");
    const auto idx = draw_column_indices(sampler, seed);
    const double c = static_cast<double>(sampler.c());
    DenseMatrix out(a.rows(), sampler.c());
    for (std::size_t t = 0; t < idx.size(); ++t) {
        const double w = 1.0 / std::sqrt(c * sampler.probs()[idx[t]]);
        const auto src = a.col(idx[t]);
        auto dst = out.col(t);
        for (std::size_t i = 0; i < a.rows(); ++i) dst[i] = w * src[i];
    }
    return out;
}

DenseMatrix sampled_gram(const DenseMatrix& a, const ColumnSampler& sampler, std::uint64_t seed) {
    require(sampler.probs().size() == a.cols(), ErrorKind::DimensionMismatch,
            "sampled_gram: sampler built for a different column count");
    const auto idx = draw_column_indices(sampler, seed);
    std::vector<std::size_t> counts(a.cols(), 0);
    for (auto i : idx) ++counts[i];

    const std::size_t m = a.rows();
    const double c = static_cast<double>(sampler.c());
    DenseMatrix g(m, m);
    for (std::size_t col = 0; col < a.cols(); ++col) {
        if (counts[col] == 0) continue;
        const double w = static_cast<double>(counts[col]) / (c * sampler.probs()[col]);
        const auto v = a.col(col);
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i <= j; ++i) {
                const double add = w * (v[i] * v[j]);
                g(i, j) += add;
                if (i != j) g(j, i) += add;
            }
        }
    }
    return g;
}

std::size_t c_lower_bound(double frob_sq, double beta, double eps, double delta) {
    require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidEpsilon, "eps must lie in (0, 1)");
    require(delta > 0.0 && delta < 1.0, ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
    require(beta > 0.0 && beta <= 1.0, ErrorKind::InvalidArgument, "beta must lie in (0, 1]");
    require(frob_sq >= 1.0 / 24.0, ErrorKind::FrobeniusTooSmall,
            "the sample-size bound assumes ||A||_F^2 >= 1/24");
    const double base = 96.0 * frob_sq / (beta * eps * eps);
    return static_cast<std::size_t>(std::ceil(base * std::log(base / std::sqrt(delta))));
}

double matmul_error_from_gram(const DenseMatrix& a, const DenseMatrix& gram) {
    require(gram.rows() == a.rows() && gram.cols() == a.rows(), ErrorKind::DimensionMismatch,
            "matmul_error: Gram matrix must be rows(A) x rows(A)");
    return spectral_norm_sym(subtract(outer_gram(a), gram));
}

double matmul_error(const DenseMatrix& a, const DenseMatrix& c) {
    require(a.rows() == c.rows(), ErrorKind::DimensionMismatch,
            "matmul_error: A and C must have the same row count");
    return matmul_error_from_gram(a, outer_gram(c));
}

double spectral_norm(const DenseMatrix& a) {
    const Vector sv = a.rows() >= a.cols() ? gram_singular_values(a)
                                           : gram_singular_values(a.transpose());
    return sv.front();
}

DenseMatrix rescale_to_unit_spectral_norm(const DenseMatrix& a) {
    const double s = spectral_norm(a);
    require(s > 0.0, ErrorKind::ZeroMatrix, "cannot rescale a zero matrix");
    const double factor = 1.0 / (s * (1.0 + 1e-10));
    DenseMatrix out = a;
    for (double& v : out.data()) v *= factor;
    return out;
}

void require_matmul_hypotheses(const DenseMatrix& a) {
    const double s = spectral_norm(a);
    if (s > 1.0 + 1e-8) {
        raise(ErrorKind::SpectralNormTooLarge,
              "||A||_2 = " + std::to_string(s) + " exceeds 1; rescale first");
    }
    const double f = a.frobenius_norm();
    require(f * f >= 1.0 / 24.0, ErrorKind::FrobeniusTooSmall, "||A||_F^2 < 1/24");
}

}  // namespace lsketch
