#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "zkcyl/dynamics.hpp"
#include "zkcyl/field.hpp"

namespace zkcyl {

struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double linf = 0.0;
    double fourier_tail = 0.0;
    double cheb_tail_I = 0.0;
    double cheb_tail_II = 0.0;
    int newton_iters = 0;
};

/// 2 pi int int u^2 rho drho dx: rectangle rule in x, layout quadrature in rho.
double mass(const Field& field);

/// Same quantity through Parseval over the Fourier coefficients.
double mass_parseval(const Field& field);

/// 2 pi int int (1/2 (u_x^2 + u_rho^2) - |u|^{p+1}/(p+1)) rho drho dx.
double energy(const Field& field, const Nonlinearity& nl);

/// max |u| over all collocation nodes.
double linf(const Field& field);

/// Largest |Fourier coefficient| over the top `fraction` of wavenumbers.
double fourier_tail(const Field& field, double fraction = 0.1);

struct ChebTails {
    double inner = 0.0;
    double outer = 0.0;
};

/// Largest Chebyshev coefficient over the top `fraction` of degrees, per
/// domain, maximized over x-nodes.
ChebTails cheb_tails(const Field& field, double fraction = 0.1);

/// Per-domain Chebyshev coefficients of the transverse profile at x-node n
/// (index = polynomial degree).
std::vector<double> cheb_profile_coefficients(const Field& field, int n, bool inner);

DiagnosticsRecord make_record(double t, const Field& field, const Nonlinearity& nl, int newton_iters = 0);

/// Delimiter-separated time series with a header row.
void write_diagnostics_header(std::ostream& out);
void write_diagnostics_row(std::ostream& out, const DiagnosticsRecord& r);
std::vector<DiagnosticsRecord> read_diagnostics(std::istream& in);

struct DriftThresholds {
    double mass = 1e-8;
    double energy = 1e-6;
    /// Below this |E(0)| the energy drift is reported as absolute.
    double energy_floor = 1e-6;
};

struct DriftReport {
    double mass_drift = 0.0;    ///< max_t |M(t) - M(0)| / M(0)  (absolute if M(0) = 0)
    double energy_drift = 0.0;  ///< relative, or absolute when |E(0)| < floor
    bool energy_relative = true;
    bool mass_flagged = false;
    bool energy_flagged = false;
    bool flagged() const noexcept { return mass_flagged || energy_flagged; }
};

/// Requires at least two records.
DriftReport drift_report(std::span<const DiagnosticsRecord> series, const DriftThresholds& thresholds = {});

struct ConeMeasurement {
    bool radiation = false;
    double degrees = 0.0;
    double x_peak = 0.0;
    double core_radius = 0.0;
    int points = 0;
};

/// Half-opening angle of the |u| = level contour trailing the main peak.
///
/// Behind the peak (x < x_peak, up to half a period back) the outermost rho
/// with |u| >= level is located per x-column by linear interpolation
/// between nodes. A core around the peak is skipped: the larger of twice the
/// peak's transverse half-width at half maximum and the distance ahead of
/// the peak over which |u| stays >= level (radiation trails the peak, so a
/// symmetric core reaches equally far behind). A line rho = m (x_peak - x) through the peak is fitted to those
/// envelope points by least squares; the result is atan(m) in degrees.
/// `radiation` is false when no envelope point exists.
ConeMeasurement cone_half_angle(const Field& field, double level);

}  // namespace zkcyl
