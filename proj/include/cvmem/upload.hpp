#ifndef CVMEM_UPLOAD_HPP
#define CVMEM_UPLOAD_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cvmem/kernels.hpp"
#include "cvmem/wigner.hpp"

namespace cvmem {

/// Parameters of the post-selected upload through the Type2 coupling.
struct PostSelectParams {
    double kappa = 0.05;
    double B = 0.01; ///< half-width of the accepted homodyne window
    double a = 1.0;  ///< pre-squeezing of the light
    double x0 = 0.0; ///< cat amplitude (cat case only)
    double eta = 1.0;

    double d() const;
    void validate() const;
};

struct UploadReport {
    PostSelectParams params;
    double S = 0.0;
    double F = 0.0;
    double N = 0.0;
    double x0_prime = 0.0;
    bool post_corrected = false;
    std::vector<std::string> warnings;
};

struct Upload {
    WignerFunction w;
    UploadReport report;
};

/// Success probability of the photon upload.
double photon_success_rate(double kappa, double a, double B);

/// Paper closed form for the uploaded squeezed photon, evaluated in log-safe
/// form. Post-correction undoes the residual squeezing exactly.
Upload closed_form_photon_upload(const PostSelectParams& params, bool post_correct,
                                 Exec exec = Exec::Parallel);

struct CatSuccess {
    double S;
    double imag_residual; ///< |Im| left over from the conjugate pair of complex erfs
};

CatSuccess cat_success_rate(double x0, double kappa, double a, double B);

/// Uploaded cat. The result is expressed in the frame of wigner_cat (fringes
/// along p); fidelity is taken against the ideal cat of amplitude x0'.
Upload closed_form_cat_upload(const PostSelectParams& params, bool post_correct, Exec exec = Exec::Parallel);

/// Exact marginal of the uncorrected uploaded cat, P(p) = integral over x.
double cat_marginal(const PostSelectParams& params, double p);

enum class MarginalForm {
    SmallB,           ///< small-window form in terms of x0 and kappa
    ReducedAmplitude, ///< the same form written with x0' = kappa x0 / d
    Limit             ///< exact B -> 0 limit of the marginal
};

double approx_marginal(const PostSelectParams& params, MarginalForm form, double p);

struct NumericOptions {
    Exec exec = Exec::Parallel; ///< used for the plane integrals
};

struct NumericUpload {
    WignerFunction w; ///< normalized conditional atomic state
    double S;
    double S_error;
};

/// Generic conditioning engine: light state W_L coupled to a vacuum atom by the
/// Type2 interaction; X'_L is accepted in [-B, B]. With eta < 1 the detected
/// light first passes a pure loss, which softens the acceptance window.
///
/// Frame: the light's x axis is the measured one, so the output is in the
/// same frame as the input.
NumericUpload postselect_upload_numeric(const WignerFunction& light, double kappa, double B, double eta = 1.0);

/// Vacuum light: the conditional atomic state is a window mixture of
/// Gaussians, computed with covariance-matrix algebra only.
struct GaussianUpload {
    WignerFunction w;
    double S;
};

GaussianUpload vacuum_upload_gaussian(double kappa, double B);

/// Photon upload with an imperfect detector, evaluated with the numeric engine.
Upload lossy_photon_upload(const PostSelectParams& params, bool post_correct, const NumericOptions& options = {});

/// F = pi * integral of W * W_target on a fixed grid; for expensive functions.
double fidelity_on_grid(const WignerFunction& w, const WignerFunction& target, double tol = 1e-7,
                        Exec exec = Exec::Parallel);

/// Maximal fidelity of the uncorrected photon upload in the limit B -> 0.
double photon_fidelity_max(double kappa, double a);

struct Asymptotics {
    double F_B2 = 0.0;      ///< coefficient of -B^2 in F
    double N_B2 = 0.0;      ///< coefficient of +B^2 in N
    double P_S_slope = 0.0; ///< P_S / B
    double F_expansion = 0.0;
    double N_expansion = 0.0;
    double P_S = 0.0;
    double F_max = 0.0;
    std::vector<std::string> warnings;
};

Asymptotics asymptotics(const PostSelectParams& params);

} // namespace cvmem

#endif
