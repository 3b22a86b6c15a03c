#include "liegyro/lieflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace liegyro {

void FlowConfig::validate() const {
    if (order < 1) throw std::invalid_argument("FlowConfig: order must be >= 1");
    if (!(step_safety > 0.0) || !(step_safety < 1.0))
        throw std::invalid_argument("FlowConfig: step_safety must lie in (0, 1)");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("FlowConfig: abs_tol must be positive");
}

namespace {

struct CompiledTerm {
    double coef;
    std::vector<int> vars;  // variable index repeated per power
};

struct CompiledField {
    int varcount;
    std::vector<std::vector<CompiledTerm>> components;
};

CompiledField compile(const PolyVectorField& field) {
    CompiledField out;
    out.varcount = field.varcount();
    if (static_cast<int>(field.components.size()) != out.varcount)
        throw std::invalid_argument("lieflow: field needs one component per variable");
    out.components.resize(field.components.size());
    for (size_t c = 0; c < field.components.size(); ++c) {
        if (field.components[c].varcount() != out.varcount)
            throw std::invalid_argument("lieflow: field components disagree on varcount");
        for (const auto& [m, coef] : field.components[c].terms()) {
            CompiledTerm t;
            t.coef = coef.convert_to<double>();
            for (size_t v = 0; v < m.exponents.size(); ++v)
                for (unsigned e = 0; e < m.exponents[v]; ++e) t.vars.push_back(static_cast<int>(v));
            out.components[c].push_back(std::move(t));
        }
    }
    return out;
}

// n-th series coefficient of the product of the listed variable jets,
// using coefficients 0..n of each factor.
double product_coefficient(const std::vector<std::vector<double>>& jets,
                           const std::vector<int>& vars, int n) {
    if (vars.empty()) return n == 0 ? 1.0 : 0.0;
    std::vector<double> acc(jets[vars[0]].begin(), jets[vars[0]].begin() + n + 1);
    std::vector<double> next(n + 1);
    for (size_t f = 1; f < vars.size(); ++f) {
        const std::vector<double>& b = jets[vars[f]];
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i <= n; ++i) {
            if (acc[i] == 0.0) continue;
            for (int j = 0; i + j <= n; ++j) next[i + j] += acc[i] * b[j];
        }
        acc.swap(next);
    }
    return acc[n];
}

// jets[v][n] = n-th scaled Taylor coefficient of variable v
std::vector<std::vector<double>> jet_recurrence(const CompiledField& f,
                                                const std::vector<double>& z0, int order) {
    const int p = f.varcount;
    std::vector<std::vector<double>> jets(p, std::vector<double>(order + 1, 0.0));
    for (int v = 0; v < p; ++v) jets[v][0] = z0[v];
    for (int n = 0; n < order; ++n) {
        for (int v = 0; v < p; ++v) {
            double fn = 0.0;
            for (const CompiledTerm& t : f.components[v])
                fn += t.coef * product_coefficient(jets, t.vars, n);
            double c = fn / (n + 1);
            if (!std::isfinite(c))
                throw std::overflow_error("taylor_coefficients: non-finite coefficient at order " +
                                          std::to_string(n + 1));
            jets[v][n + 1] = c;
        }
    }
    return jets;
}

double coeff_norm(const std::vector<std::vector<double>>& jets, int n) {
    double m = 0.0;
    for (const auto& j : jets) m = std::max(m, std::fabs(j[n]));
    return m;
}

// Largest |h| for which the ratio test on the two trailing coefficients
// keeps the series tail within abs_tol.
double step_estimate(const std::vector<std::vector<double>>& jets, const FlowConfig& cfg) {
    int n = static_cast<int>(jets.front().size()) - 1;
    double h = std::numeric_limits<double>::infinity();
    for (int k = n - 1; k <= n; ++k) {
        if (k < 1) continue;
        double c = coeff_norm(jets, k);
        if (c == 0.0) continue;
        h = std::min(h, std::pow(cfg.abs_tol / c, 1.0 / k));
    }
    return cfg.step_safety * h;
}

std::vector<double> horner(const std::vector<std::vector<double>>& jets, double h) {
    std::vector<double> z(jets.size());
    int n = static_cast<int>(jets.front().size()) - 1;
    for (size_t v = 0; v < jets.size(); ++v) {
        double acc = jets[v][n];
        for (int k = n - 1; k >= 0; --k) acc = acc * h + jets[v][k];
        z[v] = acc;
    }
    return z;
}

}  // namespace

Jet taylor_coefficients(const PolyVectorField& field, const std::vector<double>& z0, int order) {
    if (order < 0) throw std::invalid_argument("taylor_coefficients: negative order");
    if (static_cast<int>(z0.size()) != field.varcount())
        throw std::invalid_argument("taylor_coefficients: z0 size does not match field varcount");
    for (double v : z0)
        if (!std::isfinite(v)) throw std::invalid_argument("taylor_coefficients: non-finite z0");

    auto jets = jet_recurrence(compile(field), z0, order);
    Jet out;
    out.coeffs.assign(order + 1, std::vector<double>(field.varcount()));
    for (int n = 0; n <= order; ++n)
        for (int v = 0; v < field.varcount(); ++v) out.coeffs[n][v] = jets[v][n];
    return out;
}

std::vector<double> lie_propagate(const PolyVectorField& field, const std::vector<double>& z0,
                                  double t, const FlowConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(t)) throw std::invalid_argument("lie_propagate: non-finite t");
    if (static_cast<int>(z0.size()) != field.varcount())
        throw std::invalid_argument("lie_propagate: z0 size does not match field varcount");
    for (double v : z0)
        if (!std::isfinite(v)) throw std::invalid_argument("lie_propagate: non-finite z0");
    if (t == 0.0) return z0;

    const CompiledField f = compile(field);
    const double dir = t > 0.0 ? 1.0 : -1.0;
    const double span = std::fabs(t);
    const double min_step = 1e-14 * std::max(1.0, span);

    std::vector<double> z = z0;
    double done = 0.0;
    while (done < span) {
        std::vector<std::vector<double>> jets;
        try {
            jets = jet_recurrence(f, z, cfg.order);
        } catch (const std::overflow_error&) {
            throw FlowError("lie_propagate: series coefficients overflowed at t = " +
                                std::to_string(dir * done),
                            dir * done);
        }
        double est = step_estimate(jets, cfg);
        if (!(est > min_step))
            throw FlowError("lie_propagate: substep collapsed (non-convergent series) at t = " +
                                std::to_string(dir * done),
                            dir * done);
        double h = std::min(est, span - done);
        z = horner(jets, dir * h);
        for (double v : z)
            if (!std::isfinite(v))
                throw FlowError("lie_propagate: non-finite state at t = " + std::to_string(dir * done),
                                dir * done);
        double advanced = done + h;
        if (advanced == done) break;  // leftover span below time resolution
        done = advanced;
    }
    return z;
}

}  // namespace liegyro
