use crate::error::{Error, Result};
use crate::scalar::Real;

/// Adaptive quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<S = f64> {
    pub rel_tol: S,
    pub abs_tol: S,
    pub max_subdivisions: usize,
}

impl<S: Real> Default for QuadratureSpec<S> {
    fn default() -> Self {
        // 1e-8 is below single-precision resolution; clamp to what the type can deliver.
        let floor = S::lit(100.0) * S::epsilon();
        QuadratureSpec {
            rel_tol: S::lit(1e-8).max(floor),
            abs_tol: S::lit(1e-12),
            max_subdivisions: 200,
        }
    }
}

impl<S: Real> QuadratureSpec<S> {
    pub fn new(rel_tol: S, abs_tol: S, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > S::zero()) || !(abs_tol > S::zero()) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        if max_subdivisions < 10 {
            return Err(Error::Domain("max_subdivisions must be at least 10".into()));
        }
        Ok(QuadratureSpec { rel_tol, abs_tol, max_subdivisions })
    }

    /// Same settings with the relative tolerance tightened by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        let floor = S::lit(100.0) * S::epsilon();
        QuadratureSpec { rel_tol: (self.rel_tol / S::lit(factor)).max(floor), ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<S = f64> {
    pub value: S,
    pub error: S,
    pub evaluations: usize,
}

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
enum Map<S> {
    Identity,
    /// x = origin + scale · t/(1−t), t ∈ [0, 1).
    SemiInfinite { origin: S, scale: S },
}

#[derive(Debug, Clone, Copy)]
struct Panel<S> {
    lo: S,
    hi: S,
    map: Map<S>,
    value: S,
    error: S,
    abs: S,
    exhausted: bool,
}

fn eval_mapped<S: Real, F: FnMut(S) -> S>(f: &mut F, map: Map<S>, t: S) -> S {
    match map {
        Map::Identity => f(t),
        Map::SemiInfinite { origin, scale } => {
            let one_minus = S::one() - t;
            let x = origin + scale * t / one_minus;
            if !x.is_finite() {
                return S::zero();
            }
            let y = f(x);
            if y == S::zero() {
                S::zero()
            } else {
                y * scale / (one_minus * one_minus)
            }
        }
    }
}

/// One Gauss–Kronrod 7/15 application: (value, error, ∫|f|).
fn kronrod15<S: Real, F: FnMut(S) -> S>(f: &mut F, map: Map<S>, a: S, b: S) -> (S, S, S) {
    let half = (b - a) / S::lit(2.0);
    let center = (a + b) / S::lit(2.0);
    let abs_half = half.abs();

    let f_center = eval_mapped(f, map, center);
    let mut res_k = f_center * S::lit(WGK[7]);
    let mut res_g = f_center * S::lit(WG[3]);
    let mut res_abs = res_k.abs();
    let mut fv1 = [S::zero(); 7];
    let mut fv2 = [S::zero(); 7];

    for j in 0..7 {
        let dx = half * S::lit(XGK[j]);
        let f1 = eval_mapped(f, map, center - dx);
        let f2 = eval_mapped(f, map, center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k = res_k + S::lit(WGK[j]) * (f1 + f2);
        res_abs = res_abs + S::lit(WGK[j]) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + S::lit(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = res_k / S::lit(2.0);
    let mut res_asc = S::lit(WGK[7]) * (f_center - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + S::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    res_abs = res_abs * abs_half;
    res_asc = res_asc * abs_half;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != S::zero() && err != S::zero() {
        let scale = (S::lit(200.0) * err / res_asc).powf(S::lit(1.5));
        err = if scale < S::one() { res_asc * scale } else { res_asc };
    }
    let eps = S::epsilon();
    if res_abs > S::min_positive_value() / (S::lit(50.0) * eps) {
        err = err.max(S::lit(50.0) * eps * res_abs);
    }
    (value, err, res_abs)
}

fn adapt<S: Real, F: FnMut(S) -> S>(
    mut f: F,
    initial: Vec<(S, S, Map<S>)>,
    spec: &QuadratureSpec<S>,
) -> Result<Estimate<S>> {
    let mut evaluations = 0usize;
    let mut panels: Vec<Panel<S>> = initial
        .into_iter()
        .map(|(lo, hi, map)| {
            let (value, error, abs) = kronrod15(&mut f, map, lo, hi);
            evaluations += 15;
            Panel { lo, hi, map, value, error, abs, exhausted: false }
        })
        .collect();

    let budget = spec.max_subdivisions + panels.len();
    loop {
        let total: S = panels.iter().fold(S::zero(), |acc, p| acc + p.value);
        let err: S = panels.iter().fold(S::zero(), |acc, p| acc + p.error);
        let abs_sum: S = panels.iter().fold(S::zero(), |acc, p| acc + p.abs);
        let tol = spec
            .abs_tol
            .max(spec.rel_tol * total.abs())
            .max(S::lit(100.0) * S::epsilon() * abs_sum);
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::NonConvergence { estimate: total.as_f64(), error: err.as_f64() });
        }
        if err <= tol {
            return Ok(Estimate { value: total, error: err, evaluations });
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.exhausted)
            .max_by(|a, b| a.1.error.partial_cmp(&b.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            // Every panel is at its roundoff floor.
            if err <= S::lit(1e3) * S::epsilon() * abs_sum {
                return Ok(Estimate { value: total, error: err, evaluations });
            }
            return Err(Error::NonConvergence { estimate: total.as_f64(), error: err.as_f64() });
        };
        if panels.len() >= budget {
            return Err(Error::NonConvergence { estimate: total.as_f64(), error: err.as_f64() });
        }
        let p = panels[i];
        let mid = (p.lo + p.hi) / S::lit(2.0);
        let width = p.hi - p.lo;
        if width <= S::lit(100.0) * S::epsilon() * (p.lo.abs() + p.hi.abs()) {
            panels[i].exhausted = true;
            continue;
        }
        let (v1, e1, a1) = kronrod15(&mut f, p.map, p.lo, mid);
        let (v2, e2, a2) = kronrod15(&mut f, p.map, mid, p.hi);
        evaluations += 30;
        panels[i] = Panel { lo: p.lo, hi: mid, map: p.map, value: v1, error: e1, abs: a1, exhausted: false };
        panels.push(Panel { lo: mid, hi: p.hi, map: p.map, value: v2, error: e2, abs: a2, exhausted: false });
    }
}

/// ∫ₐᵇ f(x) dx with `b` possibly `+∞`.
pub fn integrate<S: Real, F: FnMut(S) -> S>(f: F, a: S, b: S, spec: &QuadratureSpec<S>) -> Result<S> {
    integrate_estimate(f, a, b, spec).map(|e| e.value)
}

pub fn integrate_estimate<S: Real, F: FnMut(S) -> S>(
    f: F,
    a: S,
    b: S,
    spec: &QuadratureSpec<S>,
) -> Result<Estimate<S>> {
    integrate_panels(f, &[a, b], S::one(), spec)
}

/// Integrates over consecutive panels `[b₀,b₁], [b₁,b₂], …`. The last
/// breakpoint may be `+∞`, in which case the final panel uses the substitution
/// x = bₙ₋₁ + scale·t/(1−t). Splitting at kinks of `f` keeps the Kronrod
/// rule on smooth pieces.
pub fn integrate_panels<S: Real, F: FnMut(S) -> S>(
    f: F,
    breaks: &[S],
    tail_scale: S,
    spec: &QuadratureSpec<S>,
) -> Result<Estimate<S>> {
    if breaks.len() < 2 {
        return Err(Error::Domain("need at least two breakpoints".into()));
    }
    if breaks.iter().any(|b| b.is_nan()) || breaks[0].is_infinite() {
        return Err(Error::Domain("invalid integration limits".into()));
    }
    if breaks.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("breakpoints must be non-decreasing".into()));
    }
    if !(tail_scale > S::zero()) {
        return Err(Error::Domain("tail scale must be positive".into()));
    }
    let mut initial = Vec::with_capacity(breaks.len() - 1);
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi == lo {
            continue;
        }
        if hi.is_infinite() {
            initial.push((S::zero(), S::one(), Map::SemiInfinite { origin: lo, scale: tail_scale }));
        } else {
            initial.push((lo, hi, Map::Identity));
        }
    }
    if initial.is_empty() {
        return Ok(Estimate { value: S::zero(), error: S::zero(), evaluations: 0 });
    }
    adapt(f, initial, spec)
}
