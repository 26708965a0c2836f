//! Positive zeros `x_{mn}` of `J_m`.
//!
//! Row `m = 0` is found by scanning `J_0` for sign changes on a unit grid.
//! Row `m + 1` is then obtained from row `m`: by interlacing, `J_{m+1}`
//! has exactly one zero in `(x_{m,n}, x_{m,n+1})`, which is refined by
//! safeguarded Newton iteration with bisection fallback. Every zero is a
//! deterministic function of its bracket, so a zero has the same bits
//! whether it was computed alone or as part of a large table.

use std::path::Path;

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::specfun::bessel::{j_pair, MAX_ORDER};
use crate::specfun::cache::{self, CacheOutcome};

/// Absolute accuracy guaranteed for every stored zero.
pub const ZERO_ACCURACY: f64 = 1e-11;

/// Largest order for which zeros can be computed (`J_{m+1}` is needed
/// for the Newton step).
pub const MAX_ZERO_ORDER: u32 = MAX_ORDER - 1;

/// Largest zero index accepted by [`bessel_zero`] and table builders.
pub const MAX_ZERO_INDEX: u32 = 100_000;

/// Dense grid of Bessel zeros, `zeros[m][n - 1] = x_{mn}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselZeroTable {
    max_order: u32,
    max_index: u32,
    zeros: Vec<f64>,
    accuracy: f64,
}

impl BesselZeroTable {
    /// Computes the table for `0 ≤ m ≤ max_order`, `1 ≤ n ≤ max_index`.
    pub fn compute(max_order: u32, max_index: u32, exec: Exec) -> Result<Self> {
        check_range(max_order, max_index)?;
        let width = max_index as usize;
        let mut zeros = Vec::with_capacity((max_order as usize + 1) * width);
        let mut row = zeros_order_zero(max_index as usize + max_order as usize);
        for m in 0..=max_order {
            if m > 0 {
                let needed = width + (max_order - m) as usize;
                row = next_row(m, &row, needed, exec)?;
            }
            zeros.extend_from_slice(&row[..width]);
        }
        Ok(Self {
            max_order,
            max_index,
            zeros,
            accuracy: ZERO_ACCURACY,
        })
    }

    pub(crate) fn from_parts(max_order: u32, max_index: u32, zeros: Vec<f64>, accuracy: f64) -> Self {
        debug_assert_eq!(zeros.len(), (max_order as usize + 1) * max_index as usize);
        Self {
            max_order,
            max_index,
            zeros,
            accuracy,
        }
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn max_index(&self) -> u32 {
        self.max_index
    }

    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Whether the table holds every `x_{mn}` with `m ≤ max_order`, `n ≤ max_index`.
    pub fn covers(&self, max_order: u32, max_index: u32) -> bool {
        max_order <= self.max_order && max_index <= self.max_index
    }

    /// `x_{mn}` with range checking.
    pub fn get(&self, m: u32, n: u32) -> Result<f64> {
        if m > self.max_order || n == 0 || n > self.max_index {
            return Err(Error::Range(format!(
                "zero ({m}, {n}) outside table m ≤ {}, 1 ≤ n ≤ {}",
                self.max_order, self.max_index
            )));
        }
        Ok(self.zero(m, n))
    }

    /// `x_{mn}` without range checking beyond slice bounds.
    #[inline]
    pub fn zero(&self, m: u32, n: u32) -> f64 {
        self.zeros[m as usize * self.max_index as usize + (n as usize - 1)]
    }

    /// Zeros of `J_m`, ascending.
    pub fn row(&self, m: u32) -> &[f64] {
        let w = self.max_index as usize;
        &self.zeros[m as usize * w..(m as usize + 1) * w]
    }

    /// Row-major view of all zeros.
    pub fn as_slice(&self) -> &[f64] {
        &self.zeros
    }

    /// The sub-table `m ≤ max_order`, `n ≤ max_index`.
    pub fn truncated(&self, max_order: u32, max_index: u32) -> Result<Self> {
        if !self.covers(max_order, max_index) || max_index == 0 {
            return Err(Error::Range(format!(
                "cannot truncate a {}x{} table to {}x{}",
                self.max_order, self.max_index, max_order, max_index
            )));
        }
        let mut zeros = Vec::with_capacity((max_order as usize + 1) * max_index as usize);
        for m in 0..=max_order {
            zeros.extend_from_slice(&self.row(m)[..max_index as usize]);
        }
        Ok(Self::from_parts(max_order, max_index, zeros, self.accuracy))
    }

    /// Hex SHA-256 of the serialized table; identical for identical tables.
    pub fn checksum(&self) -> String {
        cache::checksum_hex(&cache::encode(self))
    }

    /// Checks residual, monotonicity and interlacing for every entry.
    pub fn validate(&self) -> Result<()> {
        for m in 0..=self.max_order {
            let row = self.row(m);
            for (i, &z) in row.iter().enumerate() {
                let n = i + 1;
                if !(z.is_finite() && z > 0.0) {
                    return Err(invalid(m, n, "not a positive finite number"));
                }
                let (jm, jm1) = j_pair(m, z);
                let slope = f64::from(m) / z * jm - jm1;
                if jm.abs() >= self.accuracy.max(1e-10) * slope.abs() {
                    return Err(invalid(m, n, "residual check failed"));
                }
                if i + 1 < row.len() && z >= row[i + 1] {
                    return Err(invalid(m, n, "zeros not increasing in n"));
                }
                if m < self.max_order {
                    let above = self.row(m + 1);
                    if z >= above[i] || (i + 1 < row.len() && above[i] >= row[i + 1]) {
                        return Err(invalid(m, n, "interlacing violated"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn invalid(m: u32, n: usize, what: &str) -> Error {
    Error::Range(format!("zero table entry ({m}, {n}): {what}"))
}

fn check_range(max_order: u32, max_index: u32) -> Result<()> {
    if max_order > MAX_ZERO_ORDER {
        return Err(Error::Range(format!(
            "order {max_order} exceeds the supported maximum {MAX_ZERO_ORDER}"
        )));
    }
    if max_index == 0 || max_index > MAX_ZERO_INDEX {
        return Err(Error::Range(format!(
            "zero index must lie in 1..={MAX_ZERO_INDEX}, got {max_index}"
        )));
    }
    Ok(())
}

/// The `n`-th positive zero of `J_m`.
pub fn bessel_zero(m: u32, n: u32) -> Result<f64> {
    check_range(m, n)?;
    if n == 0 {
        return Err(Error::Range("zero index starts at 1".into()));
    }
    let mut row = zeros_order_zero(n as usize + m as usize);
    for order in 1..=m {
        row = next_row(order, &row, n as usize + (m - order) as usize, Exec::Sequential)?;
    }
    Ok(row[n as usize - 1])
}

/// Builds (or loads from `cache_path`) a table covering the requested range.
pub fn build_zero_table(max_order: u32, max_index: u32, cache_path: Option<&Path>) -> Result<BesselZeroTable> {
    build_zero_table_with(max_order, max_index, cache_path, Exec::default()).map(|(t, _)| t)
}

/// Like [`build_zero_table`], also reporting what happened with the cache.
pub fn build_zero_table_with(
    max_order: u32,
    max_index: u32,
    cache_path: Option<&Path>,
    exec: Exec,
) -> Result<(BesselZeroTable, CacheOutcome)> {
    check_range(max_order, max_index)?;
    let Some(path) = cache_path else {
        return Ok((BesselZeroTable::compute(max_order, max_index, exec)?, CacheOutcome::Uncached));
    };
    let mut outcome = CacheOutcome::Computed;
    match cache::read(path) {
        Ok(Some(table)) if table.covers(max_order, max_index) => {
            let table = if table.max_order() == max_order && table.max_index() == max_index {
                table
            } else {
                table.truncated(max_order, max_index)?
            };
            return Ok((table, CacheOutcome::Loaded));
        }
        Ok(Some(_)) => outcome = CacheOutcome::Extended,
        Ok(None) => {}
        Err(Error::Cache { reason, .. }) => outcome = CacheOutcome::Recomputed { reason },
        Err(e) => return Err(e),
    }
    let table = BesselZeroTable::compute(max_order, max_index, exec)?;
    cache::write(path, &table)?;
    Ok((table, outcome))
}

/// First `count` zeros of `J_0`, by sign-change scan on a unit grid.
fn zeros_order_zero(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    // Consecutive zeros of J_0 are more than pi apart, so each unit cell
    // holds at most one of them.
    let mut lo = 0.0f64;
    let mut f_lo = 1.0;
    while out.len() < count {
        let hi = lo + 1.0;
        let f_hi = j_pair(0, hi).0;
        if f_hi == 0.0 {
            out.push(hi);
        } else if f_lo * f_hi < 0.0 {
            out.push(refine(0, lo, hi, f_lo, f_hi));
        }
        lo = hi;
        f_lo = f_hi;
    }
    out
}

/// First `count` zeros of `J_order`, given at least `count + 1` zeros of `J_{order-1}`.
fn next_row(order: u32, prev: &[f64], count: usize, exec: Exec) -> Result<Vec<f64>> {
    if prev.len() < count + 1 {
        return Err(Error::Range(format!(
            "row {} has {} zeros, need {}",
            order - 1,
            prev.len(),
            count + 1
        )));
    }
    let row = exec.map_collect(count, |i| {
        let lo = prev[i];
        let hi = prev[i + 1];
        let f_lo = j_pair(order, lo).0;
        let f_hi = j_pair(order, hi).0;
        refine(order, lo, hi, f_lo, f_hi)
    });
    if let Some(bad) = row.iter().position(|z| z.is_nan()) {
        return Err(Error::Bracket {
            lo: prev[bad],
            hi: prev[bad + 1],
        });
    }
    Ok(row)
}

/// Safeguarded Newton on `J_m` inside a sign-change bracket. Returns NaN
/// if the bracket holds no sign change.
fn refine(m: u32, lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> f64 {
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    if f_lo * f_hi > 0.0 {
        return f64::NAN;
    }
    // Orient so that f(neg) < 0 < f(pos).
    let (mut neg, mut pos) = if f_lo < 0.0 { (lo, hi) } else { (hi, lo) };
    let eval = |x: f64| {
        let (jm, jm1) = j_pair(m, x);
        (jm, f64::from(m) / x * jm - jm1)
    };
    let mut x = 0.5 * (lo + hi);
    let mut step_old = (hi - lo).abs();
    let mut step = step_old;
    let (mut f, mut df) = eval(x);
    for _ in 0..200 {
        let newton_leaves = ((x - pos) * df - f) * ((x - neg) * df - f) > 0.0;
        let too_slow = (2.0 * f).abs() > (step_old * df).abs();
        if newton_leaves || too_slow {
            step_old = step;
            step = 0.5 * (pos - neg);
            x = neg + step;
        } else {
            step_old = step;
            step = f / df;
            x -= step;
        }
        if step.abs() <= 2.0 * f64::EPSILON * x.abs() {
            break;
        }
        (f, df) = eval(x);
        if f == 0.0 {
            break;
        }
        if f < 0.0 {
            neg = x;
        } else {
            pos = x;
        }
        if (pos - neg).abs() <= 2.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel::bessel_j;

    #[test]
    fn known_zeros() {
        assert!((bessel_zero(0, 1).unwrap() - 2.404_825_557_695_773).abs() < 1e-12);
        assert!((bessel_zero(1, 1).unwrap() - 3.831_705_970_207_512).abs() < 1e-12);
        assert!((bessel_zero(0, 2).unwrap() - 5.520_078_110_286_311).abs() < 1e-12);
    }

    #[test]
    fn single_entry_table() {
        let t = BesselZeroTable::compute(0, 1, Exec::Sequential).unwrap();
        assert_eq!(t.len(), 1);
        assert!((t.get(0, 1).unwrap() - 2.404826).abs() < 1e-6);
    }

    #[test]
    fn small_table_interlaces() {
        let t = BesselZeroTable::compute(1, 2, Exec::Sequential).unwrap();
        let (x01, x11, x02) = (t.zero(0, 1), t.zero(1, 1), t.zero(0, 2));
        assert!(x01 < x11 && x11 < x02);
        t.validate().unwrap();
    }

    #[test]
    fn table_entries_match_single_zeros_bitwise() {
        let t = BesselZeroTable::compute(7, 6, Exec::default()).unwrap();
        for m in [0, 3, 7] {
            for n in [1, 4, 6] {
                assert_eq!(t.zero(m, n).to_bits(), bessel_zero(m, n).unwrap().to_bits());
            }
        }
    }

    #[test]
    fn range_errors() {
        let t = BesselZeroTable::compute(2, 3, Exec::Sequential).unwrap();
        assert!(matches!(t.get(3, 1), Err(Error::Range(_))));
        assert!(matches!(t.get(0, 0), Err(Error::Range(_))));
        assert!(matches!(t.get(0, 4), Err(Error::Range(_))));
        assert!(bessel_zero(0, 0).is_err());
        assert!(bessel_zero(MAX_ZERO_ORDER + 1, 1).is_err());
        assert!(BesselZeroTable::compute(0, 0, Exec::Sequential).is_err());
    }

    #[test]
    fn truncation_keeps_values() {
        let t = BesselZeroTable::compute(6, 8, Exec::Sequential).unwrap();
        let s = t.truncated(3, 5).unwrap();
        assert_eq!(s.max_order(), 3);
        assert_eq!(s.max_index(), 5);
        assert_eq!(s.zero(3, 5), t.zero(3, 5));
        assert!(t.truncated(7, 1).is_err());
    }

    #[test]
    fn high_order_first_zero_has_small_residual() {
        let z = bessel_zero(300, 1).unwrap();
        // First zero of J_m sits a little above m.
        assert!(z > 300.0 && z < 330.0);
        assert!(bessel_j(300, z).unwrap().abs() < 1e-13);
    }

    #[test]
    fn refine_rejects_bracket_without_sign_change() {
        assert!(refine(0, 0.5, 1.0, 0.9, 0.7).is_nan());
    }
}
