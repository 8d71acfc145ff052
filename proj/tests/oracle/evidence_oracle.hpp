#pragma once

// Exact marginal likelihood for enumerable topic-mixture corpora, written
// independently of the inference code it checks.
//
// The evidence integrates out every topic proportion vector and every
// topic-word row. Conditioned on a joint topic assignment z for all
// tokens, both integrals are Dirichlet moments:
//   per doc:    Gamma(T a)/Gamma(T a + N_d) * prod_t Gamma(a + c_dt)/Gamma(a)
//   per topic:  Gamma(V e)/Gamma(V e + M_t) * prod_v Gamma(e + m_tv)/Gamma(e)
// so log p(w) = logsumexp over all T^N assignments. The moment identity
// itself is cross-checked by midpoint quadrature over the simplex (mapped
// to the unit square so the boundary is exact).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace evidence_oracle {

// E[prod_v p_v^{m_v}] under Dirichlet(conc) on the V-simplex, closed form.
inline double dirichlet_moment_exact(double conc, const std::vector<int>& exponents) {
    int total = 0;
    double log_m = 0.0;
    const int v = static_cast<int>(exponents.size());
    for (int e : exponents) {
        total += e;
        log_m += std::lgamma(conc + e) - std::lgamma(conc);
    }
    log_m += std::lgamma(conc * v) - std::lgamma(conc * v + total);
    return std::exp(log_m);
}

// Same moment by midpoint quadrature; V = 3 only. The triangle is mapped
// from the unit square by p1 = u(1-w), p2 = u w (Jacobian u).
inline double dirichlet_moment_grid3(double conc, const std::vector<int>& exponents, int m) {
    if (exponents.size() != 3) throw std::invalid_argument("grid check is for V = 3");
    const double log_norm =
        std::lgamma(3.0 * conc) - 3.0 * std::lgamma(conc);  // Dirichlet normalizer
    double sum = 0.0;
    const double h = 1.0 / m;
    for (int i = 0; i < m; ++i) {
        double u = (i + 0.5) * h;
        for (int j = 0; j < m; ++j) {
            double w = (j + 0.5) * h;
            double p1 = u * (1.0 - w);
            double p2 = u * w;
            double p3 = 1.0 - u;
            double f = std::exp(log_norm) * std::pow(p1, conc - 1.0 + exponents[0]) *
                       std::pow(p2, conc - 1.0 + exponents[1]) *
                       std::pow(p3, conc - 1.0 + exponents[2]) * u;  // Jacobian
            sum += f;
        }
    }
    return sum * h * h;
}

// log p(corpus) for docs given as token word-id lists.
inline double exact_log_evidence(const std::vector<std::vector<int>>& docs, int t_count,
                                 int vocab, double alpha, double eta) {
    std::size_t n_total = 0;
    for (const auto& d : docs) n_total += d.size();
    std::size_t combos = 1;
    for (std::size_t i = 0; i < n_total; ++i) {
        combos *= static_cast<std::size_t>(t_count);
        if (combos > (1u << 20)) throw std::invalid_argument("instance too large to enumerate");
    }

    std::vector<double> log_terms;
    log_terms.reserve(combos);
    std::vector<int> z(n_total, 0);
    for (std::size_t code = 0; code < combos; ++code) {
        std::size_t rem = code;
        for (std::size_t i = 0; i < n_total; ++i) {
            z[i] = static_cast<int>(rem % static_cast<std::size_t>(t_count));
            rem /= static_cast<std::size_t>(t_count);
        }
        double log_term = 0.0;
        // document-side Dirichlet moments
        std::size_t offset = 0;
        for (const auto& doc : docs) {
            std::vector<int> c(static_cast<std::size_t>(t_count), 0);
            for (std::size_t i = 0; i < doc.size(); ++i) ++c[static_cast<std::size_t>(z[offset + i])];
            offset += doc.size();
            log_term += std::lgamma(t_count * alpha) -
                        std::lgamma(t_count * alpha + static_cast<double>(doc.size()));
            for (int t = 0; t < t_count; ++t) {
                log_term += std::lgamma(alpha + c[static_cast<std::size_t>(t)]) - std::lgamma(alpha);
            }
        }
        // topic-side Dirichlet moments
        std::vector<std::vector<int>> m(static_cast<std::size_t>(t_count),
                                        std::vector<int>(static_cast<std::size_t>(vocab), 0));
        offset = 0;
        for (const auto& doc : docs) {
            for (std::size_t i = 0; i < doc.size(); ++i) {
                ++m[static_cast<std::size_t>(z[offset + i])][static_cast<std::size_t>(doc[i])];
            }
            offset += doc.size();
        }
        for (int t = 0; t < t_count; ++t) {
            int total = 0;
            for (int v = 0; v < vocab; ++v) total += m[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)];
            log_term +=
                std::lgamma(vocab * eta) - std::lgamma(vocab * eta + static_cast<double>(total));
            for (int v = 0; v < vocab; ++v) {
                log_term += std::lgamma(eta + m[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)]) -
                            std::lgamma(eta);
            }
        }
        log_terms.push_back(log_term);
    }
    double max_log = log_terms[0];
    for (double lt : log_terms) max_log = std::max(max_log, lt);
    double sum = 0.0;
    for (double lt : log_terms) sum += std::exp(lt - max_log);
    return max_log + std::log(sum);
}

}  // namespace evidence_oracle
