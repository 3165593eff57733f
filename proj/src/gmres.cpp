#include "zkcyl/gmres.hpp"

#include <cmath>
#include <vector>

namespace zkcyl {

GmresResult gmres(const LinearMap& apply, const Vector& b, const LinearMap& precondition,
                  const GmresOptions& options) {
    GmresResult result;
    const Eigen::Index n = b.size();
    result.x = Vector::Zero(n);
    const double b_norm = b.norm();
    if (b_norm == 0.0) {
        result.converged = true;
        return result;
    }
    const int m = options.restart;
    Vector r = b;
    double beta = b_norm;

    while (result.iterations < options.max_iterations) {
        std::vector<Vector> V;
        V.reserve(m + 1);
        V.push_back(r / beta);
        DenseMatrix H = DenseMatrix::Zero(m + 1, m);
        Vector cs = Vector::Zero(m), sn = Vector::Zero(m);
        Vector g = Vector::Zero(m + 1);
        g(0) = beta;

        int k = 0;
        for (; k < m && result.iterations < options.max_iterations; ++k) {
            ++result.iterations;
            Vector w = apply(precondition(V[k]));
            for (int i = 0; i <= k; ++i) {
                H(i, k) = w.dot(V[i]);
                w -= H(i, k) * V[i];
            }
            H(k + 1, k) = w.norm();
            for (int i = 0; i < k; ++i) {
                const double t = cs(i) * H(i, k) + sn(i) * H(i + 1, k);
                H(i + 1, k) = -sn(i) * H(i, k) + cs(i) * H(i + 1, k);
                H(i, k) = t;
            }
            const double denom = std::hypot(H(k, k), H(k + 1, k));
            cs(k) = denom == 0.0 ? 1.0 : H(k, k) / denom;
            sn(k) = denom == 0.0 ? 0.0 : H(k + 1, k) / denom;
            const double h_next = H(k + 1, k);
            H(k, k) = denom;
            H(k + 1, k) = 0.0;
            g(k + 1) = -sn(k) * g(k);
            g(k) = cs(k) * g(k);
            result.residual = std::abs(g(k + 1)) / b_norm;
            if (h_next == 0.0 || result.residual <= options.rel_tol) {
                ++k;
                break;
            }
            V.push_back(w / h_next);
        }
        // back substitution on the k x k triangle
        Vector y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
        Vector update = Vector::Zero(n);
        for (int i = 0; i < k; ++i) update += y(i) * V[i];
        result.x += precondition(update);
        if (result.residual <= options.rel_tol) {
            result.converged = true;
            break;
        }
        r = b - apply(result.x);
        beta = r.norm();
        result.residual = beta / b_norm;
        if (result.residual <= options.rel_tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace zkcyl
