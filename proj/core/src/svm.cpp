#include "qkband/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qkband {

namespace {

constexpr double kTau = 1e-12;  // curvature floor for indefinite kernels

struct Problem {
    const Matrix& k;
    const std::vector<int>& y;
    double c;
};

bool in_up_set(const Problem& p, const std::vector<double>& alpha, std::size_t t) {
    return p.y[t] > 0 ? alpha[t] < p.c : alpha[t] > 0.0;
}

bool in_low_set(const Problem& p, const std::vector<double>& alpha, std::size_t t) {
    return p.y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < p.c;
}

}  // namespace

SvmModel svm_fit(const LabeledSet& train, double C, double tol, std::size_t max_iter) {
    const std::size_t n = train.gram.rows();
    if (train.gram.cols() != n) throw std::invalid_argument("svm_fit: gram matrix must be square");
    if (train.labels.size() != n) throw std::invalid_argument("svm_fit: label count mismatch");
    if (!(C > 0.0)) throw std::invalid_argument("svm_fit: C must be > 0");
    bool has_pos = false, has_neg = false;
    for (int label : train.labels) {
        if (label == 1) has_pos = true;
        else if (label == -1) has_neg = true;
        else throw std::invalid_argument("svm_fit: labels must be -1 or +1");
    }
    if (!has_pos || !has_neg)
        throw std::invalid_argument("svm_fit: training set contains a single class");

    const Problem p{train.gram, train.labels, C};
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // gradient of 0.5 a'Qa - e'a at a = 0

    const double inf = std::numeric_limits<double>::infinity();
    double gmax = 0.0, gmin = 0.0;
    bool converged = false;
    std::size_t it = 0;

    for (; it < max_iter; ++it) {
        // First index: the strongest ascent direction among points that can
        // still move up.
        gmax = -inf;
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (!in_up_set(p, alpha, t)) continue;
            const double v = -p.y[t] * grad[t];
            if (v > gmax) {
                gmax = v;
                i = t;
            }
        }
        gmin = inf;
        for (std::size_t t = 0; t < n; ++t) {
            if (!in_low_set(p, alpha, t)) continue;
            gmin = std::min(gmin, -p.y[t] * grad[t]);
        }
        if (i == n || gmax - gmin <= tol) {
            converged = true;
            break;
        }

        // Second index: largest second-order decrease of the objective among
        // violating partners.
        std::size_t j = n;
        double best = 0.0;
        const double kii = p.k(i, i);
        for (std::size_t t = 0; t < n; ++t) {
            if (!in_low_set(p, alpha, t)) continue;
            const double grad_diff = gmax + p.y[t] * grad[t];
            if (grad_diff <= 0.0) continue;
            double quad = kii + p.k(t, t) - 2.0 * p.k(i, t);
            if (quad <= 0.0) quad = kTau;
            const double score = -(grad_diff * grad_diff) / quad;
            if (score < best) {
                best = score;
                j = t;
            }
        }
        if (j == n) {
            converged = true;
            break;
        }

        // Two-variable subproblem with box clipping.
        const double old_ai = alpha[i], old_aj = alpha[j];
        double quad = p.k(i, i) + p.k(j, j) - 2.0 * p.k(i, j);
        if (quad <= 0.0) quad = kTau;
        if (p.y[i] != p.y[j]) {
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else {
                if (alpha[i] < 0.0) {
                    alpha[i] = 0.0;
                    alpha[j] = -diff;
                }
            }
            if (diff > 0.0) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = C - diff;
                }
            } else {
                if (alpha[j] > C) {
                    alpha[j] = C;
                    alpha[i] = C + diff;
                }
            }
        } else {
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = sum - C;
                }
            } else {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = sum;
                }
            }
            if (sum > C) {
                if (alpha[j] > C) {
                    alpha[j] = C;
                    alpha[i] = sum - C;
                }
            } else {
                if (alpha[i] < 0.0) {
                    alpha[i] = 0.0;
                    alpha[j] = sum;
                }
            }
        }

        const double dai = alpha[i] - old_ai;
        const double daj = alpha[j] - old_aj;
        const double yi_dai = p.y[i] * dai;
        const double yj_daj = p.y[j] * daj;
        const double* ki = p.k.row(i);
        const double* kj = p.k.row(j);
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += p.y[t] * (yi_dai * ki[t] + yj_daj * kj[t]);
    }

    if (!converged) {
        // Recompute the violation bounds so the bias estimate below is
        // consistent with the final iterate.
        gmax = -inf;
        gmin = inf;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -p.y[t] * grad[t];
            if (in_up_set(p, alpha, t)) gmax = std::max(gmax, v);
            if (in_low_set(p, alpha, t)) gmin = std::min(gmin, v);
        }
    }

    SvmModel model;
    model.C = C;
    model.converged = converged;
    model.iterations = it;
    model.dual_coef.resize(n);
    double sum_free = 0.0;
    std::size_t n_free = 0;
    double sum_alpha = 0.0, alpha_dot_grad = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        model.dual_coef[t] = alpha[t] * p.y[t];
        if (alpha[t] > 0.0) model.support_indices.push_back(static_cast<int>(t));
        if (alpha[t] > 0.0 && alpha[t] < C) {
            sum_free += -p.y[t] * grad[t];
            ++n_free;
        }
        sum_alpha += alpha[t];
        alpha_dot_grad += alpha[t] * grad[t];
    }
    model.bias = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (gmax + gmin);
    // W(a) = e'a - 0.5 a'Qa, rewritten through the maintained gradient.
    model.objective = 0.5 * (sum_alpha - alpha_dot_grad);
    return model;
}

std::vector<double> decision_values(const SvmModel& model, const Matrix& cross_gram) {
    if (cross_gram.rows() == 0) return {};
    if (cross_gram.cols() != model.dual_coef.size())
        throw std::invalid_argument("decision_values: cross gram column count must equal train size");
    std::vector<double> out(cross_gram.rows(), 0.0);
    for (std::size_t t = 0; t < cross_gram.rows(); ++t) {
        const double* row = cross_gram.row(t);
        double f = model.bias;
        for (std::size_t j = 0; j < model.dual_coef.size(); ++j) f += model.dual_coef[j] * row[j];
        out[t] = f;
    }
    return out;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("roc_auc: size mismatch");
    std::size_t n_pos = 0, n_neg = 0;
    for (int label : labels) {
        if (label == 1) ++n_pos;
        else if (label == -1) ++n_neg;
        else throw std::invalid_argument("roc_auc: labels must be -1 or +1");
    }
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("roc_auc: both classes must be present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks across tied scores, then the Mann-Whitney identity.
    double rank_sum_pos = 0.0;
    std::size_t idx = 0;
    while (idx < order.size()) {
        std::size_t end = idx;
        while (end + 1 < order.size() && scores[order[end + 1]] == scores[order[idx]]) ++end;
        const double avg_rank = 0.5 * (static_cast<double>(idx + 1) + static_cast<double>(end + 1));
        for (std::size_t t = idx; t <= end; ++t)
            if (labels[order[t]] == 1) rank_sum_pos += avg_rank;
        idx = end + 1;
    }
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace qkband
