use crate::error::{Error, Result};
use crate::scalar::{KahanSum, Real};

const MAX_TERMS: usize = 10_000;

/// ₂F₁(1, 1−2/η; 2−2/η; −t) for η > 2 and t ≥ 0.
///
/// For t ≤ 1 the Pfaff transformation maps the argument to w = t/(1+t) ≤ ½,
/// where the series ₂F₁(1, 1; 2−2/η; w) converges geometrically. For t > 1
/// the 1−w connection formula is used instead, whose series runs in
/// 1/(1+t) < ½:
///
/// ```text
/// F(t) = aπ/sin(πa) · t^(−a) − (η−2)/2 · ₂F₁(1, 1; 1+2/η; 1/(1+t)) / (1+t),   a = 1 − 2/η
/// ```
///
/// Both series are summed with compensation.
pub fn hyp2f1_coverage<S: Real>(eta: S, t: S) -> Result<S> {
    if !(eta > S::lit(2.0)) || !eta.is_finite() {
        return Err(Error::Domain(format!("path-loss exponent must exceed 2, got {eta}")));
    }
    if !(t >= S::zero()) {
        return Err(Error::Domain(format!("threshold must be non-negative, got {t}")));
    }
    if t.is_infinite() {
        return Ok(S::zero());
    }
    let one = S::one();
    let delta = S::lit(2.0) / eta;
    let a = one - delta;

    if t <= one {
        let w = t / (one + t);
        let c = one + a;
        Ok(series_1_1(c, w) / (one + t))
    } else {
        let x = one / (one + t);
        let pi_a = S::PI() * a;
        let lead = pi_a / pi_a.sin() * t.powf(-a);
        let tail = (eta - S::lit(2.0)) / S::lit(2.0) * x * series_1_1(one + delta, x);
        Ok(lead - tail)
    }
}

/// Σ n!/(c)_n · z^n = ₂F₁(1, 1; c; z) for 0 ≤ z ≤ ½ and c > 1.
fn series_1_1<S: Real>(c: S, z: S) -> S {
    let mut sum = KahanSum::new();
    let mut term = S::one();
    sum.add(term);
    let eps = S::epsilon();
    for n in 0..MAX_TERMS {
        let nf = S::lit(n as f64);
        term = term * (nf + S::one()) / (nf + c) * z;
        sum.add(term);
        if term <= eps * sum.value() {
            break;
        }
    }
    sum.value()
}

/// t/(η−2) · ₂F₁(1, 1−2/η; 2−2/η; −t), the normalised interference integral
/// ∫₁^∞ t·w / (w^η + t) dw that appears in every Laplace-transform exponent.
pub fn interference_integral<S: Real>(eta: S, t: S) -> Result<S> {
    if t == S::zero() {
        return Ok(S::zero());
    }
    Ok(t / (eta - S::lit(2.0)) * hyp2f1_coverage(eta, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eta4_closed_form(t: f64) -> f64 {
        if t == 0.0 {
            1.0
        } else {
            t.sqrt().atan() / t.sqrt()
        }
    }

    /// Plain Pfaff-transformed series with no branch, many terms.
    fn brute_series(eta: f64, t: f64) -> f64 {
        let c = 2.0 - 2.0 / eta;
        let w = t / (1.0 + t);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..2_000_000 {
            term *= (n as f64 + 1.0) / (n as f64 + c) * w;
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        sum / (1.0 + t)
    }

    #[test]
    fn value_at_zero_is_one() {
        assert_eq!(hyp2f1_coverage(4.0_f64, 0.0).unwrap(), 1.0);
        assert_eq!(hyp2f1_coverage(3.3_f64, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn eta4_known_values() {
        let v1 = hyp2f1_coverage(4.0_f64, 1.0).unwrap();
        assert!((v1 - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
        let v4 = hyp2f1_coverage(4.0_f64, 4.0).unwrap();
        assert!((v4 - 2f64.atan() / 2.0).abs() < 1e-14);
        assert!((v4 - 0.553574).abs() < 1e-6);
    }

    #[test]
    fn eta4_matches_arctan_on_grid() {
        for i in 0..1000 {
            let t = 10f64.powf(-6.0 + 10.0 * i as f64 / 999.0);
            let got = hyp2f1_coverage(4.0, t).unwrap();
            let want = eta4_closed_form(t);
            assert!((got - want).abs() <= 1e-10 * want, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn branches_agree_with_unbranched_series() {
        for &eta in &[2.2, 2.5, 3.0, 3.7, 4.5, 6.0] {
            for &t in &[0.3, 0.99, 1.0, 1.01, 2.0, 10.0, 50.0] {
                let got = hyp2f1_coverage(eta, t).unwrap();
                let want = brute_series(eta, t);
                assert!((got - want).abs() < 1e-11 * want, "eta={eta} t={t}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(hyp2f1_coverage(2.0_f64, 1.0).is_err());
        assert!(hyp2f1_coverage(4.0_f64, -0.1).is_err());
        assert!(hyp2f1_coverage(4.0_f64, f64::NAN).is_err());
    }

    #[test]
    fn single_precision_tracks_double() {
        for &t in &[0.0_f32, 0.5, 1.0, 3.0, 1e3] {
            let v32 = hyp2f1_coverage(3.5_f32, t).unwrap() as f64;
            let v64 = hyp2f1_coverage(3.5_f64, t as f64).unwrap();
            assert!((v32 - v64).abs() < 1e-5 * v64.max(1e-3));
        }
    }

    #[test]
    fn infinite_argument_gives_zero() {
        assert_eq!(hyp2f1_coverage(4.0_f64, f64::INFINITY).unwrap(), 0.0);
    }
}
