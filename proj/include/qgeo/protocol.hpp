#pragma once

// Simulation of the modulated-drive measurement scheme: synthesize a
// three-level Hamiltonian with the qutrit state as an eigenstate, weakly
// modulate parameters in or out of phase, evolve the Schrodinger equation,
// fit Rabi oscillations, and reconstruct the metric and curvature from the
// fitted rates.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qgeo/errors.hpp"
#include "qgeo/geometry.hpp"
#include "qgeo/matrix.hpp"
#include "qgeo/model.hpp"
#include "qgeo/rng.hpp"

namespace qgeo {

// H(theta) = gap1 |psi1(theta)><psi1| + gap2 |psi2(theta)><psi2|, built from
// the qutrit eigenframe; the model state is the zero-energy eigenstate for
// every theta, so the spectrum never moves.
struct SynthHamiltonian {
    RealVector theta0;
    double gap1 = 1.0;
    double gap2 = 2.5;

    ComplexMatrix at(const RealVector& theta) const {
        auto [psi1, psi2] = qutrit_eigenframe(theta);
        ComplexMatrix h = outer(psi1, psi1);
        h *= cdouble{gap1, 0.0};
        ComplexMatrix h2 = outer(psi2, psi2);
        h2 *= cdouble{gap2, 0.0};
        h += h2;
        return h;
    }
};

inline SynthHamiltonian build_hamiltonian(const RealVector& theta0,
                                          std::pair<double, double> gaps,
                                          double max_amplitude = 0.05) {
    qutrit_model().validate_point(theta0);
    const auto [d1, d2] = gaps;
    if (d1 <= 0.0 || d2 <= 0.0) throw DomainError("build_hamiltonian: gaps must be positive");
    // expected Rabi linewidth ~ amplitude * gap; require well-separated lines
    const double linewidth = max_amplitude * std::max(d1, d2);
    if (std::abs(d2 - d1) < 10.0 * linewidth)
        throw DegenerateGaps("build_hamiltonian: gap separation below 10 Rabi linewidths");
    return SynthHamiltonian{theta0, d1, d2};
}

enum class PhaseMode { single, in_phase, out_of_phase };

struct ModulationConfig {
    std::vector<std::size_t> axes;      // one axis, or (sin-axis, cos-axis)
    double amplitude = 0.05;            // dimensionless radians, same for all axes
    PhaseMode mode = PhaseMode::single;
    double omega = 1.0;                 // drive frequency, resonant with a gap
    double duration = 0.0;
    double sample_step = 0.0;           // 0 = default 2*pi / (100 max(gap2, omega))
    int force_substeps = 0;             // 0 = choose from the norm-error budget

    void validate(const SynthHamiltonian& h) const {
        if (axes.empty() || axes.size() > 2 || (mode == PhaseMode::single) != (axes.size() == 1))
            throw DomainError("modulation: axis count does not match the phase mode");
        for (std::size_t a : axes)
            if (a > 2) throw IndexOutOfRange("modulation: axis out of range");
        if (std::abs(amplitude) > 0.1)
            throw DomainError("modulation: amplitude above the weak-drive limit 0.1");
        const bool near_gap = std::abs(omega - h.gap1) <= 0.2 * h.gap1 ||
                              std::abs(omega - h.gap2) <= 0.2 * h.gap2;
        if (!near_gap) throw DomainError("modulation: drive frequency targets neither gap");
        if (duration <= 0.0) throw DomainError("modulation: duration must be positive");
        const double cap = 2.0 * std::numbers::pi / (50.0 * std::max(h.gap2, omega));
        if (sample_step > cap + 1e-15)
            throw DomainError("modulation: sample step above the resolution cap");
    }
};

struct RabiTrace {
    RealVector times;
    std::array<RealVector, 3> populations;  // |<psi_k(theta0)|psi(t)>|^2
};

struct FitConfig {
    double residual_threshold = 0.05;  // rms population residual
    double contrast_floor = 0.5;       // flag fits with less oscillation contrast
    double amplitude_floor = 5e-3;     // below this the trace counts as constant
};

struct FitResult {
    double omega = 0.0;
    double uncertainty = 0.0;
    double amplitude = 0.0;
    double offset = 0.0;
    double residual_rms = 0.0;
    bool flagged = false;
    std::string flag_reason;
};

namespace detail {

using State3 = std::array<cdouble, 3>;
using Ham3 = std::array<std::array<cdouble, 3>, 3>;

inline void modulate_inplace(const ModulationConfig& mod, const RealVector& theta0, double t,
                             std::array<double, 3>& theta) {
    theta = {theta0[0], theta0[1], theta0[2]};
    const double s = std::sin(mod.omega * t);
    switch (mod.mode) {
        case PhaseMode::single: theta[mod.axes[0]] += mod.amplitude * s; break;
        case PhaseMode::in_phase:
            theta[mod.axes[0]] += mod.amplitude * s;
            theta[mod.axes[1]] += mod.amplitude * s;
            break;
        case PhaseMode::out_of_phase:
            theta[mod.axes[0]] += mod.amplitude * s;
            theta[mod.axes[1]] += mod.amplitude * std::cos(mod.omega * t);
            break;
    }
}

// H(theta) assembled in place from the eigenframe amplitudes; allocation-free
// for the integrator's inner loop.
inline void hamiltonian_inplace(double gap1, double gap2, const std::array<double, 3>& theta,
                                Ham3& h) {
    const double ca = std::cos(theta[0]), sa = std::sin(theta[0]);
    const cdouble eb{std::cos(theta[1]), -std::sin(theta[1])};
    const cdouble ef{std::cos(theta[2]), -std::sin(theta[2])};
    const double isq2 = 1.0 / std::sqrt(2.0);
    const State3 psi1{-sa * eb, 0.0, ca * ef};
    const State3 psi2{isq2 * ca * eb, isq2, isq2 * sa * ef};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            h[i][j] = gap1 * psi1[i] * std::conj(psi1[j]) + gap2 * psi2[i] * std::conj(psi2[j]);
}

inline void apply_minus_i_h(const Ham3& h, const State3& v, State3& out) {
    const cdouble mi{0.0, -1.0};
    for (int i = 0; i < 3; ++i)
        out[i] = mi * (h[i][0] * v[0] + h[i][1] * v[1] + h[i][2] * v[2]);
}

// total RK4 norm drift ~ (T/h) (lambda h)^6 / 144; solve for h at budget eps
inline double norm_budget_step(double duration, double lambda_max, double eps = 2e-10) {
    const double l6 = std::pow(lambda_max, 6.0);
    return std::pow(144.0 * eps / (duration * l6), 0.2);
}

}  // namespace detail

// Fixed-step RK4 integration of i dpsi/dt = H(theta(t)) psi. The sample step
// is subdivided so the accumulated norm drift stays inside the 1e-9 budget;
// the norm itself is audited, never silently restored.
inline RabiTrace evolve(const SynthHamiltonian& h, const ModulationConfig& mod,
                        const ComplexVector& psi_init) {
    ModulationConfig cfg = mod;
    if (cfg.sample_step <= 0.0)
        cfg.sample_step = 2.0 * std::numbers::pi / (100.0 * std::max(h.gap2, cfg.omega));
    cfg.validate(h);
    if (psi_init.size() != 3) throw DimensionMismatch("evolve: state dimension must be 3");

    const ComplexVector psi0_frame = qutrit_model().evaluate(h.theta0);
    const auto [psi1_frame, psi2_frame] = qutrit_eigenframe(h.theta0);

    int substeps = cfg.force_substeps;
    if (substeps <= 0) {
        const double hmax = detail::norm_budget_step(cfg.duration, std::max(h.gap2, cfg.omega));
        substeps = std::max(1, static_cast<int>(std::ceil(cfg.sample_step / hmax)));
    }
    const std::size_t n_samples = static_cast<std::size_t>(
        std::ceil(cfg.duration / cfg.sample_step));
    if (n_samples * static_cast<std::size_t>(substeps) > 20'000'000)
        throw DomainError("evolve: step budget exceeded; shorten the run");

    const double dt = cfg.sample_step / substeps;

    detail::State3 psi{psi_init[0], psi_init[1], psi_init[2]};
    const detail::State3 f0{psi0_frame[0], psi0_frame[1], psi0_frame[2]};
    const detail::State3 f1{psi1_frame[0], psi1_frame[1], psi1_frame[2]};
    const detail::State3 f2{psi2_frame[0], psi2_frame[1], psi2_frame[2]};

    RabiTrace trace;
    trace.times.reserve(n_samples + 1);
    for (auto& p : trace.populations) p.reserve(n_samples + 1);

    auto overlap2 = [](const detail::State3& a, const detail::State3& b) {
        return std::norm(std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1] + std::conj(a[2]) * b[2]);
    };
    auto record = [&](double t) {
        trace.times.push_back(t);
        trace.populations[0].push_back(overlap2(f0, psi));
        trace.populations[1].push_back(overlap2(f1, psi));
        trace.populations[2].push_back(overlap2(f2, psi));
    };

    record(0.0);
    double t = 0.0;
    std::array<double, 3> point{};
    detail::Ham3 h_t, h_mid, h_end;
    detail::modulate_inplace(cfg, h.theta0, t, point);
    detail::hamiltonian_inplace(h.gap1, h.gap2, point, h_t);

    detail::State3 k1, k2, k3, k4, tmp;
    for (std::size_t s = 0; s < n_samples; ++s) {
        for (int sub = 0; sub < substeps; ++sub) {
            detail::modulate_inplace(cfg, h.theta0, t + dt / 2.0, point);
            detail::hamiltonian_inplace(h.gap1, h.gap2, point, h_mid);
            detail::modulate_inplace(cfg, h.theta0, t + dt, point);
            detail::hamiltonian_inplace(h.gap1, h.gap2, point, h_end);

            detail::apply_minus_i_h(h_t, psi, k1);
            for (int i = 0; i < 3; ++i) tmp[i] = psi[i] + 0.5 * dt * k1[i];
            detail::apply_minus_i_h(h_mid, tmp, k2);
            for (int i = 0; i < 3; ++i) tmp[i] = psi[i] + 0.5 * dt * k2[i];
            detail::apply_minus_i_h(h_mid, tmp, k3);
            for (int i = 0; i < 3; ++i) tmp[i] = psi[i] + dt * k3[i];
            detail::apply_minus_i_h(h_end, tmp, k4);

            for (int i = 0; i < 3; ++i)
                psi[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            t += dt;
            h_t = h_end;
        }
        const double nrm = std::sqrt(std::norm(psi[0]) + std::norm(psi[1]) + std::norm(psi[2]));
        if (std::abs(nrm - 1.0) > 1e-8)
            throw StepTooLarge("evolve: norm drift exceeded 1e-8");
        record(t);
    }
    return trace;
}

// Least-squares fit of a target-level population to A sin^2(Omega t / 2) + c.
// The frequency is profiled: (A, c) solve linearly for each candidate Omega,
// the spectral peak seeds the scan, and the reported uncertainty comes from
// the profiled residual curvature.
inline FitResult fit_rabi(const RabiTrace& trace, int target_level, const FitConfig& cfg = {}) {
    if (target_level < 1 || target_level > 2)
        throw IndexOutOfRange("fit_rabi: target level must be 1 or 2");
    const RealVector& y = trace.populations[static_cast<std::size_t>(target_level)];
    const RealVector& ts = trace.times;
    const std::size_t n = y.size();
    if (n < 16) throw FitFailed("fit_rabi: trace too short");

    const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    if (*hi_it - *lo_it < cfg.amplitude_floor)
        throw FitFailed("fit_rabi: trace is constant within the amplitude floor");

    const double span = ts.back() - ts.front();

    // spectral peak on a decimated copy
    const std::size_t stride = std::max<std::size_t>(1, n / 4096);
    RealVector yd, td;
    for (std::size_t i = 0; i < n; i += stride) {
        yd.push_back(y[i]);
        td.push_back(ts[i]);
    }
    double mean = 0.0;
    for (double v : yd) mean += v;
    mean /= static_cast<double>(yd.size());

    const std::size_t n_freq = std::min<std::size_t>(yd.size() / 2, 256);
    double best_power = -1.0;
    double omega0 = 2.0 * std::numbers::pi / span;
    for (std::size_t j = 1; j <= n_freq; ++j) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(j) / span;
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < yd.size(); ++i) {
            re += (yd[i] - mean) * std::cos(w * td[i]);
            im += (yd[i] - mean) * std::sin(w * td[i]);
        }
        const double power = re * re + im * im;
        if (power > best_power) {
            best_power = power;
            omega0 = w;
        }
    }

    // profiled residual sum of squares at fixed Omega, over a sample stride
    auto rss_at = [&](double w, std::size_t step, double* amp_out = nullptr,
                      double* off_out = nullptr) {
        double s1 = 0.0, sy = 0.0, sxy = 0.0, sx = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; i += step) {
            const double x = std::sin(0.5 * w * ts[i]);
            const double x2 = x * x;
            s1 += x2 * x2;
            sx += x2;
            sy += y[i];
            sxy += x2 * y[i];
            ++count;
        }
        const double s2 = static_cast<double>(count);
        const double det = s1 * s2 - sx * sx;
        double amp = 0.0, off = sy / s2;
        if (std::abs(det) > 1e-30) {
            amp = (sxy * s2 - sx * sy) / det;
            off = (s1 * sy - sx * sxy) / det;
        }
        double rss = 0.0;
        for (std::size_t i = 0; i < n; i += step) {
            const double x = std::sin(0.5 * w * ts[i]);
            const double r = y[i] - (amp * x * x + off);
            rss += r * r;
        }
        if (amp_out) *amp_out = amp;
        if (off_out) *off_out = off;
        return rss;
    };

    // coarse scan around the spectral seed on a thinned trace, then ternary
    // refinement; the final parameters use every sample
    const std::size_t scan_stride = std::max<std::size_t>(1, n / 2000);
    double best_w = omega0, best_rss = rss_at(omega0, scan_stride);
    const double w_lo = 0.5 * omega0, w_hi = 1.5 * omega0;
    const int n_scan = 301;
    for (int k = 0; k < n_scan; ++k) {
        const double w = w_lo + (w_hi - w_lo) * k / (n_scan - 1);
        const double r = rss_at(w, scan_stride);
        if (r < best_rss) {
            best_rss = r;
            best_w = w;
        }
    }
    double a = best_w - (w_hi - w_lo) / (n_scan - 1);
    double b = best_w + (w_hi - w_lo) / (n_scan - 1);
    for (int it = 0; it < 120; ++it) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (rss_at(m1, scan_stride) < rss_at(m2, scan_stride))
            b = m2;
        else
            a = m1;
        if (b - a < 1e-12 * best_w) break;
    }
    FitResult fit;
    fit.omega = 0.5 * (a + b);
    best_rss = rss_at(fit.omega, 1, &fit.amplitude, &fit.offset);
    fit.residual_rms = std::sqrt(best_rss / static_cast<double>(n));

    if (fit.amplitude < cfg.amplitude_floor)
        throw FitFailed("fit_rabi: no resolvable oscillation amplitude");
    if (fit.residual_rms > cfg.residual_threshold)
        throw FitFailed("fit_rabi: residual above threshold");

    // curvature of the profiled RSS -> variance of Omega
    const double d = std::max(1e-9, 1e-5 * fit.omega);
    const double curv =
        (rss_at(fit.omega + d, 1) - 2.0 * best_rss + rss_at(fit.omega - d, 1)) / (d * d);
    if (curv > 0.0 && n > 3) {
        const double sigma2 = best_rss / static_cast<double>(n - 3);
        fit.uncertainty = std::sqrt(2.0 * sigma2 / curv);
    }

    if (fit.amplitude < cfg.contrast_floor) {
        fit.flagged = true;
        fit.flag_reason = "low contrast: likely off-resonant drive";
    }
    return fit;
}

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------

struct RunRecord {
    std::vector<std::size_t> axes;
    PhaseMode mode = PhaseMode::single;
    int target_level = 1;
    double omega = 0.0;
    double fitted_rabi = 0.0;
    double uncertainty = 0.0;
    bool skipped = false;  // analytically zero coupling, no evolution needed
};

struct ProtocolOptions {
    double noise_sigma = 0.0;   // additive Gaussian measurement noise
    std::uint64_t seed = 0;
    double rabi_periods = 3.0;  // run length in expected Rabi periods
    FitConfig fit;
};

struct Reconstruction {
    MetricTensor metric;
    CurvatureMatrix curvature;
    RealMatrix metric_sigma;
    RealMatrix curvature_sigma;
    std::vector<RunRecord> runs;
};

namespace detail {

struct TransitionSum {
    double value = 0.0;     // sum_k (Omega_k / (m Delta_k))^2
    double variance = 0.0;
};

// couplings c_k = <psi_k | v> for an effective drive tangent v; the Rabi rate
// of transition k at resonance is m * Delta_k * |c_k|
struct FrameOverlaps {
    std::array<cdouble, 2> c{};
};

}  // namespace detail

class ProtocolRunner {
public:
    ProtocolRunner(const RealVector& theta0, std::pair<double, double> gaps, double amplitude,
                   const ProtocolOptions& options = {})
        : ham_(build_hamiltonian(theta0, gaps, std::abs(amplitude))),
          amplitude_(amplitude),
          opts_(options),
          model_(qutrit_model()) {
        if (amplitude_ < 0.0) throw DomainError("protocol: amplitude must be nonnegative");
        psi0_ = model_.evaluate(theta0);
        auto frames = qutrit_eigenframe(theta0);
        frame_[0] = frames.first;
        frame_[1] = frames.second;
        for (std::size_t a = 0; a < 3; ++a) tau_[a] = model_.analytic_tangent(theta0, a);
    }

    Reconstruction reconstruct() {
        RealMatrix g(3, 3), gs2(3, 3);  // metric and its variance
        RealMatrix f(3, 3), fs2(3, 3);

        std::array<detail::TransitionSum, 3> diag;
        for (std::size_t mu = 0; mu < 3; ++mu) {
            diag[mu] = measure(single_coupling(mu), {mu}, PhaseMode::single);
            g(mu, mu) = diag[mu].value;
            gs2(mu, mu) = diag[mu].variance;
        }

        for (std::size_t mu = 0; mu < 3; ++mu) {
            for (std::size_t nu = mu + 1; nu < 3; ++nu) {
                // polarization identity from the in-phase combined drive
                const detail::TransitionSum comb =
                    measure(in_phase_coupling(mu, nu), {mu, nu}, PhaseMode::in_phase);
                g(mu, nu) = g(nu, mu) =
                    0.5 * (comb.value - diag[mu].value - diag[nu].value);
                gs2(mu, nu) = gs2(nu, mu) =
                    0.25 * (comb.variance + diag[mu].variance + diag[nu].variance);

                // out-of-phase runs in both axis orders; their antisymmetric
                // combination isolates the curvature element
                const detail::TransitionSum s_mn =
                    measure(out_phase_coupling(mu, nu), {mu, nu}, PhaseMode::out_of_phase);
                const detail::TransitionSum s_nm =
                    measure(out_phase_coupling(nu, mu), {nu, mu}, PhaseMode::out_of_phase);
                const double f_mn = s_mn.value - diag[mu].value - diag[nu].value;
                const double f_nm = s_nm.value - diag[mu].value - diag[nu].value;
                const double var_each = s_mn.variance + s_nm.variance +
                                        4.0 * (diag[mu].variance + diag[nu].variance);

                f(mu, nu) = 0.5 * (f_mn - f_nm);
                f(nu, mu) = -f(mu, nu);
                fs2(mu, nu) = fs2(nu, mu) = 0.25 * var_each;

                const double residual = std::abs(f_mn + f_nm);
                const double budget = 5.0 * std::sqrt(var_each) + systematic_floor();
                if (residual > budget)
                    throw InconsistentReconstruction(
                        "reconstruct: curvature antisymmetry residual " +
                        std::to_string(residual) + " above budget " + std::to_string(budget));
            }
        }

        Reconstruction out;
        out.metric = MetricTensor{g, ham_.theta0};
        out.curvature = CurvatureMatrix{f, ham_.theta0};
        out.metric_sigma = RealMatrix(3, 3);
        out.curvature_sigma = RealMatrix(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                out.metric_sigma(i, j) = std::sqrt(gs2(i, j));
                out.curvature_sigma(i, j) = std::sqrt(fs2(i, j));
            }
        out.runs = std::move(runs_);
        return out;
    }

    const SynthHamiltonian& hamiltonian() const { return ham_; }

private:
    static std::string run_label(const RunRecord& rec) {
        std::string label = "run[axes=";
        for (std::size_t i = 0; i < rec.axes.size(); ++i)
            label += (i ? "," : "") + std::to_string(rec.axes[i]);
        label += " mode=";
        label += (rec.mode == PhaseMode::single
                      ? "single"
                      : rec.mode == PhaseMode::in_phase ? "in-phase" : "out-of-phase");
        label += " omega=" + std::to_string(rec.omega) + "]";
        return label;
    }

    // measurement-noise floor plus the RWA systematic budget; used only to
    // judge the antisymmetry consistency check
    double systematic_floor() const {
        const double rwa = amplitude_ * amplitude_;  // leading counter-rotating scale
        return 8.0 * rwa + 4.0 * opts_.noise_sigma;
    }

    detail::FrameOverlaps single_coupling(std::size_t mu) const {
        detail::FrameOverlaps ov;
        for (int k = 0; k < 2; ++k) ov.c[k] = inner(frame_[k], tau_[mu]);
        return ov;
    }

    detail::FrameOverlaps in_phase_coupling(std::size_t mu, std::size_t nu) const {
        detail::FrameOverlaps ov;
        for (int k = 0; k < 2; ++k)
            ov.c[k] = inner(frame_[k], tau_[mu]) + inner(frame_[k], tau_[nu]);
        return ov;
    }

    detail::FrameOverlaps out_phase_coupling(std::size_t sin_axis, std::size_t cos_axis) const {
        const cdouble I{0.0, 1.0};
        detail::FrameOverlaps ov;
        for (int k = 0; k < 2; ++k)
            ov.c[k] = inner(frame_[k], tau_[cos_axis]) + I * inner(frame_[k], tau_[sin_axis]);
        return ov;
    }

    // Run both transitions for one drive configuration and sum
    // (Omega_k / (m Delta_k))^2 over k.
    detail::TransitionSum measure(const detail::FrameOverlaps& ov,
                                  const std::vector<std::size_t>& axes, PhaseMode mode) {
        detail::TransitionSum sum;
        const std::array<double, 2> gap{ham_.gap1, ham_.gap2};
        for (int k = 0; k < 2; ++k) {
            RunRecord rec;
            rec.axes = axes;
            rec.mode = mode;
            rec.target_level = k + 1;
            rec.omega = gap[k];

            const double coupling = std::abs(ov.c[k]);
            if (coupling < 1e-9) {
                rec.skipped = true;
                runs_.push_back(rec);
                continue;
            }
            const double omega_pred = amplitude_ * gap[k] * coupling;
            if (omega_pred <= 0.0)
                throw FitFailed(run_label(rec) + ": zero drive amplitude leaves traces constant");

            ModulationConfig mod;
            mod.axes = axes;
            mod.amplitude = amplitude_;
            mod.mode = mode;
            mod.omega = gap[k];
            mod.duration = opts_.rabi_periods * (2.0 * std::numbers::pi / omega_pred);

            RabiTrace trace = evolve(ham_, mod, psi0_);
            if (opts_.noise_sigma > 0.0) {
                Rng rng(opts_.seed * 1000003ULL + runs_.size() * 7919ULL + 1ULL);
                for (auto& channel : trace.populations)
                    for (double& p : channel) p += opts_.noise_sigma * rng.normal();
            }

            FitResult fit;
            try {
                fit = fit_rabi(trace, rec.target_level, opts_.fit);
            } catch (const FitFailed& e) {
                throw FitFailed(run_label(rec) + ": " + e.what());
            }
            if (fit.flagged)
                throw FitFailed(run_label(rec) + ": flagged fit on a resonant run (" +
                                fit.flag_reason + ")");
            rec.fitted_rabi = fit.omega;
            rec.uncertainty = fit.uncertainty;
            runs_.push_back(rec);

            const double scale = amplitude_ * gap[k];
            const double s = fit.omega / scale;
            sum.value += s * s;
            const double ds = 2.0 * fit.omega * fit.uncertainty / (scale * scale);
            sum.variance += ds * ds;
        }
        return sum;
    }

    SynthHamiltonian ham_;
    double amplitude_;
    ProtocolOptions opts_;
    StateModel model_;
    ComplexVector psi0_;
    std::array<ComplexVector, 2> frame_;
    std::array<ComplexVector, 3> tau_;
    std::vector<RunRecord> runs_;
};

inline Reconstruction reconstruct_qgt(const RealVector& theta0, std::pair<double, double> gaps,
                                      double amplitude, const ProtocolOptions& options = {}) {
    ProtocolRunner runner(theta0, gaps, amplitude, options);
    return runner.reconstruct();
}

}  // namespace qgeo
