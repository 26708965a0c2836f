//! Deterministic triple sums over the mode box `0 ≤ m ≤ M`, `1 ≤ n ≤ N`,
//! `1 ≤ l ≤ L`.
//!
//! Every sum here is a pairwise (tree) reduction over a fixed ordering of
//! the terms. The tree depends only on the number of terms, never on the
//! thread count, so sequential and parallel execution return the same bits.
//!
//! Two orderings are provided:
//!
//! * [`box_sum`]: each `m` row is reduced over `(n, l)` in lexicographic
//!   order, then the row sums are reduced pairwise in ascending `m`.
//! * [`shell_sum`]: the cube of side `k` is split into shells
//!   `max(m, n, l) = k`; each shell is reduced pairwise in lexicographic
//!   `(m, n, l)` order and the shell sums are accumulated in ascending `k`.
//!   A single pass thus yields every checkpoint of a convergence study.
//!
//! The weight `η_m` (1 for `m = 0`, 2 otherwise) is applied by the engine.

use crate::error::{Error, Result};
use crate::par::Exec;

/// Terms per leaf of the reduction tree, summed left to right.
pub const LEAF: usize = 64;

/// Subtrees at least this large may be handed to another worker.
const SPLIT_PARALLEL: usize = 1 << 13;

/// Default convergence checkpoints: 10, 50, 100, …, 450, 499, 500.
pub const DEFAULT_CHECKPOINTS: [usize; 12] = [10, 50, 100, 150, 200, 250, 300, 350, 400, 450, 499, 500];

/// Azimuthal degeneracy: 1 for `m = 0`, 2 for `±m` pairs.
#[inline]
pub fn eta(m: u32) -> f64 {
    if m == 0 {
        1.0
    } else {
        2.0
    }
}

/// Upper limits `(M, N, L)` of the truncated mode sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationOrder {
    pub m_max: u32,
    pub n_max: u32,
    pub l_max: u32,
}

impl TruncationOrder {
    pub fn new(m_max: u32, n_max: u32, l_max: u32) -> Result<Self> {
        if n_max == 0 || l_max == 0 {
            return Err(Error::InvalidParameter(format!(
                "N and L must be at least 1 (got N = {n_max}, L = {l_max})"
            )));
        }
        Ok(Self { m_max, n_max, l_max })
    }

    /// `M = N = L = k`.
    pub fn cube(k: u32) -> Result<Self> {
        Self::new(k, k, k)
    }

    /// Number of `(m, n, l)` triples in the box.
    pub fn len(&self) -> u64 {
        (u64::from(self.m_max) + 1) * u64::from(self.n_max) * u64::from(self.l_max)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A pair of running sums, reduced component-wise.
pub type Pair = (f64, f64);

#[inline]
fn add(a: Pair, b: Pair) -> Pair {
    (a.0 + b.0, a.1 + b.1)
}

/// Pairwise reduction of `get(0), …, get(len - 1)`.
///
/// Ranges of at most [`LEAF`] terms are summed left to right; longer ranges
/// are split at `len / 2`.
pub fn pairwise_by<G>(len: usize, get: &G, exec: Exec) -> Pair
where
    G: Fn(usize) -> Pair + Sync,
{
    pairwise_range(0, len, get, exec)
}

fn pairwise_range<G>(lo: usize, hi: usize, get: &G, exec: Exec) -> Pair
where
    G: Fn(usize) -> Pair + Sync,
{
    let len = hi - lo;
    if len <= LEAF {
        let mut acc = (0.0, 0.0);
        for i in lo..hi {
            acc = add(acc, get(i));
        }
        return acc;
    }
    let mid = lo + len / 2;
    let (a, b) = if len >= SPLIT_PARALLEL {
        exec.join(
            || pairwise_range(lo, mid, get, exec),
            || pairwise_range(mid, hi, get, exec),
        )
    } else {
        (
            pairwise_range(lo, mid, get, Exec::Sequential),
            pairwise_range(mid, hi, get, Exec::Sequential),
        )
    };
    add(a, b)
}

/// Pairwise reduction of a slice, with the same tree as [`pairwise_by`].
pub fn pairwise_sum(values: &[Pair]) -> Pair {
    pairwise_by(values.len(), &|i| values[i], Exec::Sequential)
}

/// η-weighted sum of `term` over the box, in the canonical box order.
pub fn box_sum<F>(trunc: TruncationOrder, term: F, exec: Exec) -> Pair
where
    F: Fn(u32, u32, u32) -> Pair + Sync + Send,
{
    let n_max = trunc.n_max as usize;
    let l_max = trunc.l_max as usize;
    let row_len = n_max * l_max;
    let row = |m: u32| {
        let w = eta(m);
        let get = |i: usize| {
            let n = (i / l_max) as u32 + 1;
            let l = (i % l_max) as u32 + 1;
            let (a, b) = term(m, n, l);
            (w * a, w * b)
        };
        pairwise_by(row_len, &get, exec)
    };
    let rows = exec.map_collect(trunc.m_max as usize + 1, |m| row(m as u32));
    pairwise_sum(&rows)
}

/// Number of triples in shell `k` (those with `max(m, n, l) = k`).
pub fn shell_len(k: u32) -> usize {
    let k = k as usize;
    3 * k * k - k
}

/// The `i`-th triple of shell `k` in lexicographic `(m, n, l)` order.
#[inline]
pub fn shell_index(k: u32, i: usize) -> (u32, u32, u32) {
    let ku = k as usize;
    let per_m = 2 * ku - 1;
    let m = i / per_m;
    if m < ku {
        let j = i % per_m;
        if j < ku - 1 {
            (m as u32, j as u32 + 1, k)
        } else {
            (m as u32, k, (j - (ku - 1)) as u32 + 1)
        }
    } else {
        let j = i - ku * per_m;
        (k, (j / ku) as u32 + 1, (j % ku) as u32 + 1)
    }
}

/// η-weighted sum of `term` over shell `k`.
pub fn single_shell<F>(k: u32, term: &F, exec: Exec) -> Pair
where
    F: Fn(u32, u32, u32) -> Pair + Sync,
{
    let get = |i: usize| {
        let (m, n, l) = shell_index(k, i);
        let w = eta(m);
        let (a, b) = term(m, n, l);
        (w * a, w * b)
    };
    pairwise_by(shell_len(k), &get, exec)
}

/// Cumulative sums at each checkpoint `k` of the cube `M = N = L = k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub checkpoints: Vec<usize>,
    pub values_a: Vec<f64>,
    pub values_b: Vec<f64>,
}

impl ConvergenceReport {
    pub fn value(&self, k: usize) -> Result<Pair> {
        let i = self
            .checkpoints
            .binary_search(&k)
            .map_err(|_| Error::MissingCheckpoint(k))?;
        Ok((self.values_a[i], self.values_b[i]))
    }

    /// Ratios `value(k_{i+1}) / value(k_i)` of successive checkpoints.
    pub fn ratios(&self) -> Vec<Pair> {
        (1..self.checkpoints.len())
            .map(|i| {
                (
                    self.values_a[i] / self.values_a[i - 1],
                    self.values_b[i] / self.values_b[i - 1],
                )
            })
            .collect()
    }

    /// Multiplies the second tracked sum by `factor`.
    pub fn scale_b(mut self, factor: f64) -> Self {
        for v in &mut self.values_b {
            *v *= factor;
        }
        self
    }

    /// Multiplies both tracked sums by `factor`.
    pub fn scale(mut self, factor: f64) -> Self {
        for v in self.values_a.iter_mut().chain(self.values_b.iter_mut()) {
            *v *= factor;
        }
        self
    }
}

pub fn validate_checkpoints(checkpoints: &[usize]) -> Result<()> {
    if checkpoints.is_empty() {
        return Err(Error::InvalidParameter("no checkpoints given".into()));
    }
    if checkpoints[0] == 0 {
        return Err(Error::InvalidParameter("checkpoints start at 1".into()));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("checkpoints must be strictly ascending".into()));
    }
    if *checkpoints.last().unwrap() > u32::MAX as usize {
        return Err(Error::InvalidParameter("checkpoint too large".into()));
    }
    Ok(())
}

/// One pass over the cube of the largest checkpoint, recording the
/// cumulative η-weighted sums at every checkpoint.
pub fn shell_sum<F>(term: F, checkpoints: &[usize], exec: Exec) -> Result<ConvergenceReport>
where
    F: Fn(u32, u32, u32) -> Pair + Sync + Send,
{
    validate_checkpoints(checkpoints)?;
    let k_max = *checkpoints.last().unwrap();
    let shells = exec.map_collect(k_max, |i| single_shell(i as u32 + 1, &term, exec));
    let mut values_a = Vec::with_capacity(checkpoints.len());
    let mut values_b = Vec::with_capacity(checkpoints.len());
    let mut acc = (0.0, 0.0);
    let mut next = checkpoints.iter().peekable();
    for (i, s) in shells.iter().enumerate() {
        acc = add(acc, *s);
        if next.peek() == Some(&&(i + 1)) {
            values_a.push(acc.0);
            values_b.push(acc.1);
            next.next();
        }
    }
    Ok(ConvergenceReport {
        checkpoints: checkpoints.to_vec(),
        values_a,
        values_b,
    })
}

/// `value(k_hi) / value(k_lo)` for both tracked sums.
pub fn convergence_ratio(report: &ConvergenceReport, k_hi: usize, k_lo: usize) -> Result<Pair> {
    let hi = report.value(k_hi)?;
    let lo = report.value(k_lo)?;
    Ok((hi.0 / lo.0, hi.1 / lo.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(m: u32, n: u32, l: u32) -> Pair {
        let (m, n, l) = (f64::from(m), f64::from(n), f64::from(l));
        (1.0 / (1.0 + m + n * n + l.sqrt()), (m + 0.5 * n) / (l * l + n))
    }

    #[test]
    fn shell_sizes_partition_the_cube() {
        let mut total = 0;
        for k in 1..=30u32 {
            total += shell_len(k);
            assert_eq!(total as u64, TruncationOrder::cube(k).unwrap().len());
        }
    }

    #[test]
    fn shell_index_is_lexicographic_and_exact() {
        for k in 1..=9u32 {
            let got: Vec<_> = (0..shell_len(k)).map(|i| shell_index(k, i)).collect();
            let mut want = Vec::new();
            for m in 0..=k {
                for n in 1..=k {
                    for l in 1..=k {
                        if m.max(n).max(l) == k {
                            want.push((m, n, l));
                        }
                    }
                }
            }
            assert_eq!(got, want, "k = {k}");
        }
    }

    #[test]
    fn unit_box() {
        let r = shell_sum(term, &[1], Exec::Sequential).unwrap();
        let t0 = term(0, 1, 1);
        let t1 = term(1, 1, 1);
        assert_eq!(r.values_a[0], 1.0 * t0.0 + 2.0 * t1.0);
        assert_eq!(r.values_b[0], 1.0 * t0.1 + 2.0 * t1.1);
    }

    #[test]
    fn pairwise_tree_shape() {
        let v: Vec<Pair> = (0..(3 * LEAF + 5)).map(|i| (i as f64, 1.0)).collect();
        let s = pairwise_sum(&v);
        let n = v.len() as f64;
        assert_eq!(s, (n * (n - 1.0) / 2.0, n));
        assert_eq!(pairwise_sum(&[]), (0.0, 0.0));
    }

    #[test]
    fn box_and_shell_routes_agree() {
        let r = shell_sum(term, &[7, 12], Exec::default()).unwrap();
        for (i, &k) in r.checkpoints.iter().enumerate() {
            let b = box_sum(TruncationOrder::cube(k as u32).unwrap(), term, Exec::default());
            assert!((b.0 - r.values_a[i]).abs() <= 1e-13 * b.0.abs());
            assert!((b.1 - r.values_b[i]).abs() <= 1e-13 * b.1.abs());
        }
    }

    #[test]
    fn sequential_equals_parallel() {
        let cps = [3, 20, 41];
        let a = shell_sum(term, &cps, Exec::Sequential).unwrap();
        let b = shell_sum(term, &cps, Exec::default()).unwrap();
        assert_eq!(a, b);
        let t = TruncationOrder::new(9, 40, 33).unwrap();
        assert_eq!(box_sum(t, term, Exec::Sequential), box_sum(t, term, Exec::default()));
    }

    #[test]
    fn ratios() {
        let r = shell_sum(term, &[5, 10, 20], Exec::Sequential).unwrap();
        assert_eq!(convergence_ratio(&r, 10, 10).unwrap(), (1.0, 1.0));
        let up = convergence_ratio(&r, 20, 10).unwrap();
        let down = convergence_ratio(&r, 10, 20).unwrap();
        assert!((up.0 * down.0 - 1.0).abs() < 1e-15);
        assert!((up.1 * down.1 - 1.0).abs() < 1e-15);
        assert!(matches!(convergence_ratio(&r, 11, 10), Err(Error::MissingCheckpoint(11))));
        assert_eq!(r.ratios().len(), 2);
    }

    #[test]
    fn checkpoint_validation() {
        assert!(shell_sum(term, &[], Exec::Sequential).is_err());
        assert!(shell_sum(term, &[0, 3], Exec::Sequential).is_err());
        assert!(shell_sum(term, &[4, 4], Exec::Sequential).is_err());
        assert!(shell_sum(term, &[5, 3], Exec::Sequential).is_err());
        assert!(TruncationOrder::new(3, 0, 1).is_err());
    }
}
