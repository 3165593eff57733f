#include "zkcyl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "zkcyl/error.hpp"

namespace zkcyl {

namespace {

Eigen::Map<const Vector> weights(const Discretization& disc) {
    const auto& w = disc.layout().quad_weights();
    return {w.data(), static_cast<Eigen::Index>(w.size())};
}

double integrate(const Discretization& disc, const RealMatrix& density) {
    return 2.0 * pi * disc.grid().spacing() * (density * weights(disc)).sum();
}

}  // namespace

double mass(const Field& field) { return integrate(field.disc(), field.values.array().square().matrix()); }

double mass_parseval(const Field& field) {
    const auto& disc = field.disc();
    const ModalField modal = forward_x(field);
    const int modes = disc.modes();
    Vector column_sums = Vector::Zero(disc.nr());
    for (int j = 0; j < modes; ++j) {
        const double mult = (j == 0 || j == disc.grid().nyquist()) ? 1.0 : 2.0;
        column_sums += mult * modal.values.row(j).cwiseAbs2().transpose();
    }
    column_sums *= disc.nx();
    return 2.0 * pi * disc.grid().spacing() * column_sums.dot(weights(disc));
}

double energy(const Field& field, const Nonlinearity& nl) {
    const auto& disc = field.disc();
    const auto& layout = disc.layout();
    const int ni = layout.inner_size();
    const int no = layout.outer_size();
    const int off = layout.outer_offset();

    const Field ux = dx(field);
    RealMatrix grad2 = ux.values.array().square().matrix();

    // u_rho^2 = 4 s u_s^2 on domain I
    const RealMatrix us = field.values.leftCols(ni) * layout.inner_ds().transpose();
    for (int i = 0; i < ni; ++i) {
        grad2.col(i) += 4.0 * layout.inner_s()[i] * us.col(i).array().square().matrix();
    }
    const RealMatrix ur = field.values.rightCols(no) * layout.outer_drho().transpose();
    grad2.middleCols(off, no) += ur.array().square().matrix();

    const Rational q(nl.p.num() + nl.p.den(), nl.p.den());
    RealMatrix potential(field.values.rows(), field.values.cols());
    for (Eigen::Index i = 0; i < field.values.size(); ++i) {
        potential.data()[i] = abs_power(field.values.data()[i], q);
    }
    if (!nl.active) potential.setZero();
    const RealMatrix density = 0.5 * grad2 - potential / q.value();
    return integrate(disc, density);
}

double linf(const Field& field) { return field.values.cwiseAbs().maxCoeff(); }

double fourier_tail(const Field& field, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw ConfigError("tail fraction must lie in (0, 1]");
    }
    const ModalField modal = forward_x(field);
    const int modes = field.disc().modes();
    const int count = std::clamp(static_cast<int>(std::ceil(fraction * modes - 1e-12)), 1, modes);
    return modal.values.bottomRows(count).cwiseAbs().maxCoeff();
}

std::vector<double> cheb_profile_coefficients(const Field& field, int n, bool inner) {
    const auto& layout = field.disc().layout();
    std::vector<double> samples;
    if (inner) {
        // Chebyshev order runs l = +1 .. -1, i.e. interface to axis
        for (int i = layout.inner_size() - 1; i >= 0; --i) samples.push_back(field.values(n, i));
    } else {
        for (int i = 0; i < layout.outer_size(); ++i) samples.push_back(field.values(n, layout.outer_offset() + i));
    }
    return cheb_coefficients(samples);
}

ChebTails cheb_tails(const Field& field, double fraction) {
    const auto& layout = field.disc().layout();
    const CosineTransform inner(layout.n_inner());
    const CosineTransform outer(layout.n_outer());
    std::vector<double> a(layout.inner_size()), b(layout.outer_size());
    ChebTails tails;
    for (int n = 0; n < field.disc().nx(); ++n) {
        for (int i = 0; i < layout.inner_size(); ++i) a[i] = field.values(n, layout.inner_size() - 1 - i);
        for (int i = 0; i < layout.outer_size(); ++i) b[i] = field.values(n, layout.outer_offset() + i);
        inner.apply(a);
        outer.apply(b);
        tails.inner = std::max(tails.inner, tail_magnitude(a, fraction));
        tails.outer = std::max(tails.outer, tail_magnitude(b, fraction));
    }
    return tails;
}

DiagnosticsRecord make_record(double t, const Field& field, const Nonlinearity& nl, int newton_iters) {
    DiagnosticsRecord r;
    r.t = t;
    r.mass = mass(field);
    r.energy = energy(field, nl);
    r.linf = linf(field);
    r.fourier_tail = fourier_tail(field);
    const ChebTails tails = cheb_tails(field);
    r.cheb_tail_I = tails.inner;
    r.cheb_tail_II = tails.outer;
    r.newton_iters = newton_iters;
    return r;
}

void write_diagnostics_header(std::ostream& out) {
    out << "t\tmass\tenergy\tlinf\tfourier_tail\tcheb_tail_I\tcheb_tail_II\tnewton_iters\n";
}

void write_diagnostics_row(std::ostream& out, const DiagnosticsRecord& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%d\n", r.t, r.mass, r.energy,
                  r.linf, r.fourier_tail, r.cheb_tail_I, r.cheb_tail_II, r.newton_iters);
    out << buf;
}

std::vector<DiagnosticsRecord> read_diagnostics(std::istream& in) {
    std::vector<DiagnosticsRecord> rows;
    std::string line;
    if (!std::getline(in, line) || line.rfind("t\tmass", 0) != 0) {
        throw FormatError("diagnostics file lacks the expected header row");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        DiagnosticsRecord r;
        if (!(ls >> r.t >> r.mass >> r.energy >> r.linf >> r.fourier_tail >> r.cheb_tail_I >> r.cheb_tail_II >>
              r.newton_iters)) {
            throw FormatError("malformed diagnostics row: " + line);
        }
        rows.push_back(r);
    }
    return rows;
}

DriftReport drift_report(std::span<const DiagnosticsRecord> series, const DriftThresholds& thresholds) {
    if (series.size() < 2) {
        throw ConfigError("drift report needs at least two records");
    }
    const double m0 = series.front().mass;
    const double e0 = series.front().energy;
    DriftReport report;
    report.energy_relative = std::abs(e0) >= thresholds.energy_floor;
    for (const auto& r : series) {
        const double dm = std::abs(r.mass - m0);
        report.mass_drift = std::max(report.mass_drift, m0 > 0.0 ? dm / m0 : dm);
        const double de = std::abs(r.energy - e0);
        report.energy_drift = std::max(report.energy_drift, report.energy_relative ? de / std::abs(e0) : de);
    }
    report.mass_flagged = report.mass_drift > thresholds.mass;
    report.energy_flagged = report.energy_drift > thresholds.energy;
    return report;
}

ConeMeasurement cone_half_angle(const Field& field, double level) {
    const auto& disc = field.disc();
    const auto& grid = disc.grid();
    const auto& rho = disc.layout().physical_rho();
    const int nr = disc.nr();
    if (!(level > 0.0)) {
        throw ConfigError("contour level must be positive");
    }
    const RealMatrix a = field.values.cwiseAbs();
    Eigen::Index n_peak = 0, j_peak = 0;
    const double peak = a.maxCoeff(&n_peak, &j_peak);
    if (!(level < peak)) {
        throw ConfigError("contour level must lie below the field maximum");
    }

    ConeMeasurement out;
    out.x_peak = grid.nodes[n_peak];

    // transverse half width of the peak at half maximum, along its x-row
    double half_width = rho.back();
    for (int j = static_cast<int>(j_peak); j < nr; ++j) {
        if (a(n_peak, j) < 0.5 * peak) {
            const double f0 = a(n_peak, j - 1), f1 = a(n_peak, j);
            const double frac = (f0 - 0.5 * peak) / (f0 - f1);
            half_width = rho[j - 1] + frac * (rho[j] - rho[j - 1]) - rho[j_peak];
            break;
        }
    }
    // Extent of the |u| >= level region ahead of the peak along the peak's
    // row. Radiation trails the peak, so a radially symmetric core reaches
    // equally far behind; everything within that distance is core.
    double leading = 0.0;
    for (int step = 1; step < grid.N / 2; ++step) {
        const int n = static_cast<int>((n_peak + step) % grid.N);
        if (a(n, j_peak) < level) {
            const int prev = static_cast<int>((n_peak + step - 1) % grid.N);
            const double f0 = a(prev, j_peak), f1 = a(n, j_peak);
            leading = (step - 1 + (f0 - level) / (f0 - f1)) * grid.spacing();
            break;
        }
        leading = step * grid.spacing();
    }
    out.core_radius = std::max(2.0 * half_width, leading);

    double sxy = 0.0, sxx = 0.0;
    for (int n = 0; n < grid.N; ++n) {
        // distance behind the peak, wrapped into [0, period)
        double behind = out.x_peak - grid.nodes[n];
        behind -= grid.period() * std::floor(behind / grid.period());
        if (behind <= out.core_radius || behind > 0.5 * grid.period()) continue;
        int outer = -1;
        for (int j = nr - 1; j >= 0; --j) {
            if (a(n, j) >= level) {
                outer = j;
                break;
            }
        }
        if (outer < 0) continue;
        double envelope = rho[outer] - rho[j_peak];
        if (outer + 1 < nr && rho[outer + 1] > rho[outer]) {
            const double f0 = a(n, outer), f1 = a(n, outer + 1);
            envelope += (f0 - level) / (f0 - f1) * (rho[outer + 1] - rho[outer]);
        }
        sxy += behind * envelope;
        sxx += behind * behind;
        ++out.points;
    }
    if (out.points == 0) return out;
    out.radiation = true;
    out.degrees = std::atan(sxy / sxx) * 180.0 / pi;
    return out;
}

}  // namespace zkcyl
