//! Adaptive quadrature on finite intervals.
//!
//! [`integrate`] is a globally adaptive 7/15-point Gauss–Kronrod scheme with
//! the QUADPACK error heuristics. [`integrate_simpson`] is an unrelated
//! adaptive Simpson rule with Richardson correction, kept as a second,
//! independent rule for cross-checking.

use crate::error::{Error, Result};

/// Tolerances and subdivision limit for the adaptive rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 50,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            max_depth,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_depth < 1 {
            return Err(Error::InvalidParameter("max_depth must be at least 1".into()));
        }
        Ok(())
    }

    fn target(&self, estimate: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * estimate.abs())
    }
}

// Kronrod abscissae and weights for the 15-point rule; odd indices are the
// embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

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

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Cap on the number of live subintervals of [`integrate`].
const MAX_SEGMENTS: usize = 2000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    resabs: f64,
    depth: u32,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut gauss = fc * WG[3];
    let mut kronrod = fc * WGK[7];
    let mut abs_k = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_k += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let resabs = abs_k * half.abs();
    let resasc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err, resabs)
}

/// Integrates `f` over `[lo, hi]` with the adaptive Gauss–Kronrod rule.
///
/// Intervals are bisected in order of decreasing error estimate until the
/// summed estimate is below `max(abs_tol, rel_tol·|I|)`. Requests tighter
/// than the rounding floor of the rule (about `100·ε·∫|f|`) are clamped to it.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "integration bounds [{lo}, {hi}] must be finite and ordered"
        )));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let (value, error, resabs) = gauss_kronrod(&f, lo, hi);
    let mut segments = vec![Segment {
        lo,
        hi,
        value,
        error,
        resabs,
        depth: 0,
    }];
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        let total_abs: f64 = segments.iter().map(|s| s.resabs).sum();
        if !total.is_finite() {
            return Err(Error::Domain(format!(
                "integrand is not finite on [{lo}, {hi}]"
            )));
        }
        if total_err <= spec.target(total).max(100.0 * f64::EPSILON * total_abs) {
            return Ok(sum_in_order(&segments));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, s)| {
                if s.error > best.1 {
                    (i, s.error)
                } else {
                    best
                }
            });
        let seg = segments[worst];
        let mid = 0.5 * (seg.lo + seg.hi);
        if seg.depth >= spec.max_depth || segments.len() >= MAX_SEGMENTS || mid <= seg.lo || mid >= seg.hi {
            return Err(Error::QuadratureNonConvergence {
                lo,
                hi,
                estimate: total,
                error: total_err,
            });
        }
        let (v1, e1, a1) = gauss_kronrod(&f, seg.lo, mid);
        let (v2, e2, a2) = gauss_kronrod(&f, mid, seg.hi);
        segments[worst] = Segment {
            lo: seg.lo,
            hi: mid,
            value: v1,
            error: e1,
            resabs: a1,
            depth: seg.depth + 1,
        };
        segments.push(Segment {
            lo: mid,
            hi: seg.hi,
            value: v2,
            error: e2,
            resabs: a2,
            depth: seg.depth + 1,
        });
    }
}

fn sum_in_order(segments: &[Segment]) -> f64 {
    let mut ordered: Vec<&Segment> = segments.iter().collect();
    ordered.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut sum = 0.0;
    let mut comp = 0.0;
    for s in ordered {
        // Neumaier
        let t = sum + s.value;
        if sum.abs() >= s.value.abs() {
            comp += (sum - t) + s.value;
        } else {
            comp += (s.value - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Integrates `f` over `[lo, hi]` with adaptive Simpson and Richardson
/// extrapolation. Intended as an independent check on [`integrate`].
pub fn integrate_simpson<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "integration bounds [{lo}, {hi}] must be finite and ordered"
        )));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let fa = f(lo);
    let fb = f(hi);
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    // A coarse magnitude estimate turns the relative tolerance into an
    // absolute one for the recursion.
    let coarse = integrate(&f, lo, hi, &QuadratureSpec::new(1e-6, 1e-6, 40)?)
        .unwrap_or(whole)
        .abs();
    let tol = spec.abs_tol.max(spec.rel_tol * coarse);
    let mut ok = true;
    let value = simpson_step(&f, lo, hi, fa, fm, fb, whole, tol, spec.max_depth, &mut ok);
    if ok {
        Ok(value)
    } else {
        Err(Error::QuadratureNonConvergence {
            lo,
            hi,
            estimate: value,
            error: f64::NAN,
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    ok: &mut bool,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (m - a) <= f64::EPSILON * m.abs() {
        return left + right + delta / 15.0;
    }
    if depth == 0 {
        *ok = false;
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, ok)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, ok)
}
