#pragma once

#include "bpsgcn/ad.hpp"
#include "bpsgcn/geometry.hpp"
#include "bpsgcn/params.hpp"
#include "bpsgcn/rng.hpp"

#include <vector>

namespace bpsgcn {

struct VrnnConfig {
    int input_dim = 2; // geometric feature (cos theta, |a|)
    int embed = 16;    // feature/latent embedding width
    int hidden = 64;   // recurrent state H
    int latent = 32;   // latent Z
};

/// Posterior/prior/decoder head output on the tape; batch rows are agents.
struct GaussianPair {
    ad::Value mu;
    ad::Value sigma; // strictly positive via softplus
};

/// All per-step quantities produced by one recurrence step.
struct VrnnStep {
    GaussianPair posterior; // mu_z, sigma_z
    GaussianPair prior;     // mu_0, sigma_0
    GaussianPair decoded;   // mu_g, sigma_g
    ad::Value z;            // reparameterized latent sample
    ad::Value h;            // hidden state after the step
};

struct VrnnRolloutTape {
    std::vector<VrnnStep> steps;
    ad::Value final_mu_z; // N x Z clustering latent (final-step posterior mean)
};

/// Plain (value-only) rollout summary.
struct LatentSummary {
    ad::Mat latent;                  // N x Z
    std::vector<ad::Mat> step_mu_z;  // diagnostics
    std::vector<ad::Mat> step_h;
};

/// Variational recurrent behavior encoder-decoder over geometric feature
/// sequences. Heads are single-hidden-layer MLPs (tanh) with softplus on
/// every sigma; the recurrence is a GRU whose update gate at 0 leaves the
/// hidden state unchanged.
class Vrnn {
public:
    Vrnn(const VrnnConfig& cfg, unsigned long long seed);

    const VrnnConfig& config() const { return cfg_; }
    ParamStore& params() { return params_; }
    const ParamStore& params() const { return params_; }

    /// [mu_z, sigma_z] = phi_enc(phi_g(g_t), h_prev)
    GaussianPair encode_step(ad::Tape& t, TapeBind& bind, ad::Value g_t, ad::Value h_prev);
    /// [mu_g, sigma_g] = phi_dec(phi_z(z_t), h_prev)
    GaussianPair decode_step(ad::Tape& t, TapeBind& bind, ad::Value z_t, ad::Value h_prev);
    /// [mu_0, sigma_0] = phi_prior(h_prev)
    GaussianPair prior_step(ad::Tape& t, TapeBind& bind, ad::Value h_prev);
    /// h_t from (phi_g(g_t), phi_z(z_t), h_prev)
    ad::Value recur(ad::Tape& t, TapeBind& bind, ad::Value g_t, ad::Value z_t,
                    ad::Value h_prev);

    /// Full rollout from h_0 = 0 over step batches g_steps[t] (N x input_dim).
    /// Posterior sampling noise comes from `noise`.
    VrnnRolloutTape run(ad::Tape& t, TapeBind& bind, const std::vector<ad::Mat>& g_steps,
                        Rng& noise);

    /// Value-only rollout for inference/diagnostics.
    LatentSummary run_sequence(const std::vector<ad::Mat>& g_steps,
                               unsigned long long noise_seed);

private:
    GaussianPair head(ad::Tape& t, TapeBind& bind, const std::string& prefix, ad::Value in);

    VrnnConfig cfg_;
    ParamStore params_;
};

/// z = mu + sigma .* noise (gradient flows to mu and sigma).
ad::Value reparameterize(ad::Value mu, ad::Value sigma, const ad::Mat& noise);

/// Negative evidence lower bound: sum over steps of
/// [-log N(g_t | mu_g, sigma_g^2) + KL(posterior || prior)], averaged over
/// agents. KL is the closed diagonal-Gaussian form.
ad::Value elbo_loss(ad::Tape& t, const std::vector<VrnnStep>& steps,
                    const std::vector<ad::Mat>& g_steps);

/// Stacks per-agent geometric sequences (equal length T) into T step batches
/// of shape N x 2.
std::vector<ad::Mat> geo_step_batches(const std::vector<GeometricSequence>& sequences);

/// Per-agent T x 2 feature matrices (soft-DTW reference form).
std::vector<ad::Mat> geo_agent_mats(const std::vector<GeometricSequence>& sequences);

} // namespace bpsgcn
