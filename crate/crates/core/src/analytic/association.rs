//! Max-RSS association probabilities and the joint law of (serving tier,
//! horizontal serving distance).
//!
//! Work in u = R_k², the squared horizontal distance to the nearest tier-k
//! BS, which is exponential with rate πλ_k. Given u, tier j loses the
//! comparison with probability
//!
//! ```text
//! exp(−πλ_j · max(0, P_jk (u + h_k²) − h_j²))
//! ```
//!
//! so the joint density g_k(u) is piecewise log-linear, with kinks at
//! u = h_j² P_kj − h_k². Every probability below is an exact closed-form
//! integral of g_k over such pieces, assembled in log space.

use crate::model::{power_ratio, NetworkConfig, TierId};
use crate::scalar::Real;

/// One competing tier as seen from serving tier `k`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Competitor<S> {
    pub intensity: S,
    /// P_jk = (P_j/P_k)^(2/η).
    pub ratio: S,
    /// P_jk·h_k² − h_j²: competitor term offset at u = 0.
    pub offset: S,
    /// u at which the competitor's constraint becomes active (may be ≤ 0).
    pub onset: S,
}

/// Serving-tier geometry shared by the association, distance and coverage code.
#[derive(Debug, Clone)]
pub(crate) struct ServingGeometry<S> {
    pub intensity: S,
    pub competitors: [Competitor<S>; 2],
}

impl<S: Real> ServingGeometry<S> {
    pub fn new(k: TierId, config: &NetworkConfig<S>) -> Self {
        let hk2 = config[k].height.powi(2);
        let competitors = k.others().map(|j| {
            let ratio = power_ratio(j, k, config);
            let hj2 = config[j].height.powi(2);
            Competitor {
                intensity: config[j].intensity,
                ratio,
                offset: ratio * hk2 - hj2,
                onset: hj2 / ratio - hk2,
            }
        });
        ServingGeometry { intensity: config[k].intensity, competitors }
    }

    /// Positive kinks of g_k in u, ascending.
    pub fn kinks(&self) -> Vec<S> {
        let mut v: Vec<S> =
            self.competitors.iter().map(|c| c.onset).filter(|&u| u > S::zero()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup();
        v
    }

    /// log of P[tier-k nearest at squared distance > u and k wins] minus the
    /// constant ln(λ_k/Λ) factor (−π(λ_k u + Σ_active λ_j (P_jk(u+h_k²) − h_j²))).
    pub fn log_survival(&self, u: S) -> S {
        let mut acc = self.intensity * u;
        for c in &self.competitors {
            let term = c.ratio * u + c.offset;
            if term > S::zero() && c.intensity > S::zero() {
                acc = acc + c.intensity * term;
            }
        }
        -S::PI() * acc
    }

    /// ln g_k(u), the joint density of (association with k, R_k² = u).
    pub fn log_density(&self, u: S) -> S {
        (S::PI() * self.intensity).ln() + self.log_survival(u)
    }

    /// Decay rate πΛ of g_k once every competitor is active.
    pub fn tail_rate(&self) -> S {
        let lam = self
            .competitors
            .iter()
            .fold(self.intensity, |acc, c| acc + c.intensity * c.ratio);
        S::PI() * lam
    }

    /// Slope Λ of the exponent on the piece containing `u` (constraint-active set at `u`).
    fn slope_at(&self, u: S) -> S {
        let mut lam = self.intensity;
        for c in &self.competitors {
            if u >= c.onset {
                lam = lam + c.intensity * c.ratio;
            }
        }
        lam
    }

    /// ∫_{u0}^{u1} g_k(u) du in closed form; `u1` may be +∞.
    pub fn mass(&self, u0: S, u1: S) -> S {
        if self.intensity <= S::zero() || !(u1 > u0) {
            return S::zero();
        }
        let u0 = u0.max(S::zero());
        let mut cuts = vec![u0];
        cuts.extend(self.kinks().into_iter().filter(|&u| u > u0 && u < u1));
        cuts.push(u1);
        let mut total = S::zero();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let lam = self.slope_at(a);
            let ea = self.log_survival(a);
            // e^{ea} − e^{eb} = e^{ea}·(1 − e^{eb−ea}), with eb − ea = −πΛ(b−a) on this piece.
            let piece = if b.is_infinite() {
                ea.exp()
            } else {
                -ea.exp() * (-S::PI() * lam * (b - a)).exp_m1()
            };
            total = total + self.intensity / lam * piece;
        }
        total
    }
}

/// Clamped horizontal-distance breakpoints L_m, L_s1, L_s2 (metres).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceBreakpoints<S = f64> {
    pub l_m: S,
    pub l_s1: S,
    pub l_s2: S,
    /// Raw radicands h_v²P_mv − h_m², h_m²P_sm − h_s², h_v²P_sv − h_s².
    pub radicands: [S; 3],
}

impl<S: Real> DistanceBreakpoints<S> {
    pub fn new(config: &NetworkConfig<S>) -> Self {
        use TierId::*;
        let h2 = |k: TierId| config[k].height.powi(2);
        let radicands = [
            h2(Uav) * power_ratio(Macro, Uav, config) - h2(Macro),
            h2(Macro) * power_ratio(Small, Macro, config) - h2(Small),
            h2(Uav) * power_ratio(Small, Uav, config) - h2(Small),
        ];
        let root = |r: S| r.max(S::zero()).sqrt();
        DistanceBreakpoints {
            l_m: root(radicands[0]),
            l_s1: root(radicands[1]),
            l_s2: root(radicands[2]),
            radicands,
        }
    }

    /// True when every radicand is non-negative, the regime in which the
    /// three-branch closed forms in [`super::closed_form`] are exact.
    pub fn closed_form_regime(&self) -> bool {
        self.radicands.iter().all(|&r| r >= S::zero())
    }
}

/// Sub-terms of the macro and small association probabilities, split at the
/// distance breakpoints: `m1` = macro association with X_m ≤ L_m, `m2` beyond;
/// `s1` = small with X_s ≤ L_s1, `s2` between L_s1 and L_s2, `s3` beyond L_s2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationParts<S = f64> {
    pub m1: S,
    pub m2: S,
    pub s1: S,
    pub s2: S,
    pub s3: S,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationResult<S = f64> {
    pub a_m: S,
    pub a_s: S,
    pub a_v: S,
    pub parts: AssociationParts<S>,
}

impl<S: Real> AssociationResult<S> {
    pub fn get(&self, k: TierId) -> S {
        match k {
            TierId::Macro => self.a_m,
            TierId::Small => self.a_s,
            TierId::Uav => self.a_v,
        }
    }

    pub fn as_array(&self) -> [S; 3] {
        [self.a_m, self.a_s, self.a_v]
    }

    pub fn total(&self) -> S {
        self.a_m + self.a_s + self.a_v
    }
}

/// Association probabilities A_m, A_s, A_v with their breakpoint sub-terms.
pub fn association_probabilities<S: Real>(config: &NetworkConfig<S>) -> AssociationResult<S> {
    let bp = DistanceBreakpoints::new(config);
    let inf = S::infinity();
    let gm = ServingGeometry::new(TierId::Macro, config);
    let gs = ServingGeometry::new(TierId::Small, config);
    let gv = ServingGeometry::new(TierId::Uav, config);

    let lm2 = bp.l_m.powi(2);
    let ls1 = bp.l_s1.powi(2);
    let ls2 = bp.l_s2.powi(2).max(ls1);
    let parts = AssociationParts {
        m1: gm.mass(S::zero(), lm2),
        m2: gm.mass(lm2, inf),
        s1: gs.mass(S::zero(), ls1),
        s2: gs.mass(ls1, ls2),
        s3: gs.mass(ls2, inf),
    };
    AssociationResult {
        a_m: parts.m1 + parts.m2,
        a_s: parts.s1 + parts.s2 + parts.s3,
        a_v: gv.mass(S::zero(), inf),
        parts,
    }
}
