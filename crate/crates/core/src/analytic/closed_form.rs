//! Three-branch closed forms for the association probabilities and the
//! height-free interference Laplace transform.
//!
//! These expressions assume every breakpoint radicand is non-negative (see
//! [`DistanceBreakpoints::closed_form_regime`]); inside that regime they
//! coincide with the general piecewise evaluation in [`super::association`].
//! They are kept as an independent cross-check.

use super::association::{AssociationParts, AssociationResult, DistanceBreakpoints};
use crate::error::Result;
use crate::model::{power_ratio, Mode, NetworkConfig, TierId};
use crate::scalar::Real;
use crate::specfun::interference_integral;

struct Sym<S> {
    lm: S,
    ls: S,
    lv: S,
    hm2: S,
    hs2: S,
    hv2: S,
    p_sm: S,
    p_ms: S,
    p_mv: S,
    p_vm: S,
    p_sv: S,
    p_vs: S,
}

impl<S: Real> Sym<S> {
    fn new(c: &NetworkConfig<S>) -> Self {
        use TierId::*;
        Sym {
            lm: c[Macro].intensity,
            ls: c[Small].intensity,
            lv: c[Uav].intensity,
            hm2: c[Macro].height.powi(2),
            hs2: c[Small].height.powi(2),
            hv2: c[Uav].height.powi(2),
            p_sm: power_ratio(Small, Macro, c),
            p_ms: power_ratio(Macro, Small, c),
            p_mv: power_ratio(Macro, Uav, c),
            p_vm: power_ratio(Uav, Macro, c),
            p_sv: power_ratio(Small, Uav, c),
            p_vs: power_ratio(Uav, Small, c),
        }
    }
}

/// Exponent of the A_m2 term.
pub fn macro_outer_exponent<S: Real>(config: &NetworkConfig<S>) -> S {
    let s = Sym::new(config);
    let pi = S::PI();
    -pi * s.p_mv * s.hv2 * (s.lm + s.ls * s.p_sm + s.lv * s.p_vm)
        + pi * (s.lm * s.hm2 + s.ls * s.hs2 + s.lv * s.hv2)
}

/// Exponent of the A_s3 term as obtained from the small-cell survival
/// function at L_s2: −π h_v² P_sv (λ_s + λ_m P_ms + λ_v P_vs) + π Σ λ_j h_j².
pub fn small_outer_exponent<S: Real>(config: &NetworkConfig<S>) -> S {
    let s = Sym::new(config);
    let pi = S::PI();
    -pi * s.hv2 * s.p_sv * (s.ls + s.lm * s.p_ms + s.lv * s.p_vs)
        + pi * (s.lm * s.hm2 + s.ls * s.hs2 + s.lv * s.hv2)
}

/// Closed-form association probabilities. `None` outside the regime where
/// all radicands are non-negative.
pub fn association_closed_form<S: Real>(config: &NetworkConfig<S>) -> Option<AssociationResult<S>> {
    if !DistanceBreakpoints::new(config).closed_form_regime() {
        return None;
    }
    let s = Sym::new(config);
    let pi = S::PI();
    let one = S::one();

    let lam_m2 = s.lm + s.ls * s.p_sm;
    let lam_m3 = lam_m2 + s.lv * s.p_vm;
    let m1 = s.lm / lam_m2
        * ((-pi * s.ls * (s.p_sm * s.hm2 - s.hs2)).exp()
            - (-pi * s.p_mv * s.hv2 * lam_m2 + pi * (s.lm * s.hm2 + s.ls * s.hs2)).exp());
    let m2 = s.lm / lam_m3 * macro_outer_exponent(config).exp();

    let lam_s2 = s.ls + s.lm * s.p_ms;
    let lam_s3 = lam_s2 + s.lv * s.p_vs;
    let s1 = one - (-pi * s.ls * (s.hm2 * s.p_sm - s.hs2)).exp();
    let s2 = s.ls / lam_s2
        * ((-pi * s.p_sm * s.hm2 * lam_s2 + pi * (s.ls * s.hs2 + s.lm * s.hm2)).exp()
            - (-pi * s.hv2 * s.p_sv * lam_s2 + pi * (s.ls * s.hs2 + s.lm * s.hm2)).exp());
    let s3 = s.ls / lam_s3 * macro_outer_exponent(config).exp();

    let lam_v = s.lv + s.lm * s.p_mv + s.ls * s.p_sv;
    let a_v = s.lv / lam_v
        * (-pi * s.hv2 * lam_v + pi * (s.lm * s.hm2 + s.ls * s.hs2 + s.lv * s.hv2)).exp();

    let parts = AssociationParts { m1, m2, s1, s2, s3 };
    Some(AssociationResult { a_m: m1 + m2, a_s: s1 + s2 + s3, a_v, parts })
}

/// Height-free Laplace transform: every interferer of tier j is excluded
/// only out to √P_jk · z.
pub fn laplace_height_free<S: Real>(
    mode: Mode,
    tier: TierId,
    threshold: S,
    z: S,
    config: &NetworkConfig<S>,
) -> Result<S> {
    let eta = config.path_loss_exponent;
    let weight = mode
        .interferers(tier)
        .iter()
        .fold(S::zero(), |acc, &j| acc + config[j].intensity * power_ratio(j, tier, config));
    let exponent =
        -S::lit(2.0) * S::PI() * z * z * interference_integral(eta, threshold)? * weight;
    Ok(exponent.exp())
}
