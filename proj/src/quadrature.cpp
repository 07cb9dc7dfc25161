#include "inhibnet/quadrature.hpp"

#include <cmath>
#include <vector>

namespace inhibnet {

namespace {
struct Panel {
    double a, b;
    double fa, fm, fb;
    double whole;
    double tol;
    int depth;
};

constexpr int kMaxDepth = 60;
} // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                  std::size_t max_evaluations) {
    QuadratureResult result;
    if (a == b) return result;
    auto eval = [&](double x) {
        ++result.evaluations;
        return f(x);
    };
    const double fa = eval(a);
    const double fb = eval(b);
    const double fm = eval(0.5 * (a + b));
    std::vector<Panel> stack{{a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), abs_tol, 0}};

    // Depth-first, left panel first, so the summation order is fixed.
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double m = 0.5 * (p.a + p.b);
        const double left_mid = 0.5 * (p.a + m);
        const double right_mid = 0.5 * (m + p.b);
        const bool budget_left = result.evaluations + 2 <= max_evaluations;
        if (!budget_left) {
            result.converged = false;
            result.value += p.whole;
            continue;
        }
        const double flm = eval(left_mid);
        const double frm = eval(right_mid);
        const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
        const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
        const double delta = left + right - p.whole;
        if (std::abs(delta) <= 15.0 * p.tol || p.depth >= kMaxDepth) {
            if (p.depth >= kMaxDepth && std::abs(delta) > 15.0 * p.tol) result.converged = false;
            result.value += left + right + delta / 15.0;
            continue;
        }
        stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol, p.depth + 1});
        stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.tol, p.depth + 1});
    }
    return result;
}

} // namespace inhibnet
