#include "qsemis/minimize.hpp"

#include <algorithm>
#include <cmath>

#include "qsemis/errors.hpp"

namespace qsemis {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

MinimizeResult minimize_bounded(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, const std::vector<double>& lower,
                                const std::vector<double>& upper, const MinimizeOptions& opt) {
    const std::size_t n = x0.size();
    if (lower.size() != n || upper.size() != n)
        throw ConfigError("minimize_bounded: bound dimensions disagree with the start point");
    for (std::size_t i = 0; i < n; ++i) {
        if (lower[i] > upper[i]) throw ConfigError("minimize_bounded: lower bound above upper bound");
        x0[i] = std::clamp(x0[i], lower[i], upper[i]);
    }

    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        const double v = f(x);
        if (!std::isfinite(v))
            throw NumericalError("minimize_bounded: objective returned a non-finite value");
        return v;
    };
    auto gradient = [&](const std::vector<double>& x) {
        std::vector<double> g(n);
        std::vector<double> probe = x;
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = x[i];
            probe[i] = xi + opt.grad_step;
            const double fp = eval(probe);
            probe[i] = xi - opt.grad_step;
            const double fm = eval(probe);
            probe[i] = xi;
            g[i] = (fp - fm) / (2.0 * opt.grad_step);
        }
        return g;
    };

    std::vector<double> x = x0;
    double fx = eval(x);
    MinimizeResult best{x, fx, evals};

    const std::size_t nn = n * n;
    std::vector<double> hinv(nn, 0.0);
    auto reset_hinv = [&] {
        std::fill(hinv.begin(), hinv.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) hinv[i * n + i] = 1.0;
    };
    reset_hinv();

    if (evals + static_cast<int>(2 * n) > opt.max_evals) {
        best.evals = evals;
        return best;
    }
    std::vector<double> g = gradient(x);

    for (;;) {
        // Projected gradient: components pushing out of the box do not count.
        double pg = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double gi = g[i];
            if (x[i] <= lower[i] && gi > 0.0) gi = 0.0;
            if (x[i] >= upper[i] && gi < 0.0) gi = 0.0;
            pg = std::max(pg, std::abs(gi));
        }
        if (pg < 1e-10) break;

        std::vector<double> dir(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += hinv[i * n + j] * g[j];
            dir[i] = -s;
        }
        if (dot(dir, g) >= 0.0) {  // not a descent direction; fall back to steepest descent
            reset_hinv();
            for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
        }

        // Backtracking Armijo search on the projected step.
        double alpha = 1.0;
        bool moved = false;
        std::vector<double> xn(n);
        double fn = fx;
        while (evals < opt.max_evals) {
            bool same = true;
            for (std::size_t i = 0; i < n; ++i) {
                xn[i] = std::clamp(x[i] + alpha * dir[i], lower[i], upper[i]);
                same = same && xn[i] == x[i];
            }
            if (same) break;
            fn = eval(xn);
            double slope = 0.0;
            for (std::size_t i = 0; i < n; ++i) slope += g[i] * (xn[i] - x[i]);
            if (fn <= fx + 1e-4 * slope) {
                moved = true;
                break;
            }
            alpha *= 0.5;
            if (alpha < 1e-12) break;
        }
        if (!moved) break;

        const double improvement = fx - fn;
        if (fn < best.value) {
            best.x = xn;
            best.value = fn;
        }
        if (improvement <= opt.tolerance * (1.0 + std::abs(fn))) {
            x = xn;
            fx = fn;
            break;
        }
        if (evals + static_cast<int>(2 * n) > opt.max_evals) {
            x = xn;
            fx = fn;
            break;
        }
        std::vector<double> gn = gradient(xn);
        std::vector<double> step(n), dg(n);
        for (std::size_t i = 0; i < n; ++i) {
            step[i] = xn[i] - x[i];
            dg[i] = gn[i] - g[i];
        }
        const double sy = dot(step, dg);
        const double ss = std::sqrt(dot(step, step));
        const double yy = std::sqrt(dot(dg, dg));
        if (sy > 1e-12 * ss * yy) {
            // Inverse BFGS update: H <- (I - r s y^T) H (I - r y s^T) + r s s^T.
            const double rho = 1.0 / sy;
            std::vector<double> hy(n);
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j) s += hinv[i * n + j] * dg[j];
                hy[i] = s;
            }
            const double yhy = dot(dg, hy);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    hinv[i * n + j] += rho * ((1.0 + rho * yhy) * step[i] * step[j] -
                                              hy[i] * step[j] - step[i] * hy[j]);
        } else {
            reset_hinv();
        }
        x = xn;
        fx = fn;
        g = gn;
    }

    if (fx < best.value) {
        best.x = x;
        best.value = fx;
    }
    best.evals = evals;
    return best;
}

}  // namespace qsemis
