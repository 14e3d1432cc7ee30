#pragma once

// JSON building blocks shared by the CLI and the test suites. All numeric
// output is rounded to 12 significant digits; rounding here (rather than at
// print time) keeps files byte-identical across repeated runs.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgeo/estimation.hpp"
#include "qgeo/matrix.hpp"
#include "qgeo/protocol.hpp"

namespace qgeo {

using ordered_json = nlohmann::ordered_json;

inline double round_sig(double x, int digits = 12) {
    if (!std::isfinite(x)) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

inline ordered_json json_vector(const RealVector& v) {
    ordered_json out = ordered_json::array();
    for (double x : v) out.push_back(round_sig(x));
    return out;
}

inline ordered_json json_matrix(const RealMatrix& m) {
    ordered_json out = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(round_sig(m(i, j)));
        out.push_back(row);
    }
    return out;
}

inline const char* phase_mode_name(PhaseMode mode) {
    switch (mode) {
        case PhaseMode::single: return "single";
        case PhaseMode::in_phase: return "in-phase";
        default: return "out-of-phase";
    }
}

inline ordered_json reconstruction_json(const Reconstruction& rec,
                                        std::pair<double, double> gaps, double amplitude) {
    ordered_json out;
    out["theta0"] = json_vector(rec.metric.theta);
    out["gaps"] = {round_sig(gaps.first), round_sig(gaps.second)};
    out["amplitude"] = round_sig(amplitude);
    ordered_json runs = ordered_json::array();
    for (const RunRecord& r : rec.runs) {
        ordered_json jr;
        jr["axes"] = r.axes;
        jr["phase_mode"] = phase_mode_name(r.mode);
        jr["omega"] = round_sig(r.omega);
        jr["target_level"] = r.target_level;
        jr["skipped"] = r.skipped;
        jr["fitted_rabi"] = round_sig(r.fitted_rabi);
        jr["uncertainty"] = round_sig(r.uncertainty);
        runs.push_back(jr);
    }
    out["runs"] = runs;
    out["g"] = json_matrix(rec.metric.g);
    out["g_uncertainty"] = json_matrix(rec.metric_sigma);
    out["f"] = json_matrix(rec.curvature.f);
    out["f_uncertainty"] = json_matrix(rec.curvature_sigma);
    return out;
}

inline ordered_json bound_report_json(const BoundReport& r) {
    ordered_json out;
    out["theta"] = json_vector(r.theta);
    out["j"] = json_matrix(r.j);
    out["f"] = json_matrix(r.f);
    out["gamma_spectrum"] = json_vector(r.spectrum.eigenvalues);
    out["gamma"] = round_sig(r.spectrum.gamma);
    out["support_rank"] = r.spectrum.support_rank;
    out["inestimable_axes"] = r.spectrum.inestimable_axes;
    out["sld_crb"] = round_sig(r.sld_crb);
    out["attainable_qcrb"] = round_sig(r.attainable_qcrb);
    out["sandwich_mid"] = round_sig(r.sandwich_mid);
    out["sandwich_gamma"] = round_sig(r.sandwich_gamma);
    out["sandwich_two"] = round_sig(r.sandwich_two);
    return out;
}

}  // namespace qgeo
