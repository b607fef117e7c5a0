#ifndef CVMEM_RECORD_HPP
#define CVMEM_RECORD_HPP

#include <optional>
#include <string>

#include "cvmem/gaussian.hpp"

namespace cvmem {

/// Feed-forward gain and residual squeezing of the deterministic record with
/// the light pre-squeezed by c (X_L -> X_L / c, P_L -> c P_L).
struct RecordGains {
    double g;
    double a;
    double T_R; ///< transmission up to the residual squeezing
};

RecordGains solve_record_gains(double kappa, double c);

/// Squeezing post-correction through the Type2 coupling with vacuum light.
struct PostCorrection {
    double g;
    double b;
    double T_C;
};

PostCorrection postcorrection_params(double kappa_prime);

/// Total transmission of record plus matched post-correction.
double composed_transmission(double kappa, double c);

struct ChannelReport {
    double kappa = 0.0;
    double c = 1.0;
    double T_x = 0.0;
    double T_p = 0.0;
    double V_Nx = 0.0;
    double V_Np = 0.0;
    double cross_talk = 0.0; ///< largest leak of a light quadrature into the wrong atomic quadrature
    bool noise_excess_free = false;
    std::string frame;
    double g = 0.0;
    double a = 1.0;
    bool post_corrected = false;
    double kappa_prime = 0.0;
    double g_post = 0.0;
    double b = 1.0;
};

/// Runs the full Heisenberg pipeline (pre-squeeze, Type1 coupling, homodyne of
/// X'_L with feed-forward onto P_A, optionally the post-correction stage) on
/// the modes (L, A, L0) and reads the channel off the output atomic rows.
///
/// Without post-correction the residual squeezing by a is undone in the report
/// (the channel is noise excess free up to that squeezing). `gain_override`
/// replaces the first feed-forward gain.
ChannelReport record_channel_report(double kappa, double c, bool with_postcorrection,
                                    std::optional<double> gain_override = std::nullopt);

} // namespace cvmem

#endif
