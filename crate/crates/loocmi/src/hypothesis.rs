//! Finite hypothesis classes given by explicit prediction tables, plus
//! shattering and VC-dimension checks by direct enumeration.

use crate::domain::{FiniteDomain, PointIdx};
use crate::error::{Error, Result};
use crate::num::{rat_int, Rat};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::sync::Arc;

/// Default cap on domain size for subset-enumeration operations.
pub const DEFAULT_VC_CAP: usize = 20;

/// A hypothesis class as an explicit table: one row per hypothesis, one
/// column per domain point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiniteHypothesisClass {
    domain: Arc<FiniteDomain>,
    table: Vec<Vec<Rat>>,
    names: Vec<String>,
}

impl FiniteHypothesisClass {
    pub fn new(domain: Arc<FiniteDomain>, table: Vec<Vec<Rat>>, names: Vec<String>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::Input("hypothesis table must be nonempty".into()));
        }
        if names.len() != table.len() {
            return Err(Error::Input(format!(
                "{} names for {} hypotheses",
                names.len(),
                table.len()
            )));
        }
        let width = domain.len();
        for row in &table {
            if row.len() != width {
                return Err(Error::DomainMismatch(format!(
                    "hypothesis row has {} entries for a {width}-point domain",
                    row.len()
                )));
            }
        }
        let mut seen = HashSet::new();
        for row in &table {
            if !seen.insert(row.clone()) {
                return Err(Error::Input("duplicate hypothesis rows".into()));
            }
        }
        Ok(Self { domain, table, names })
    }

    /// One-dimensional thresholds `h_k(x) = 1[x > k]` for `k in {0, …, m}`
    /// over the grid `{1, …, m}`.
    pub fn thresholds_above(m: usize) -> Self {
        let domain = Arc::new(FiniteDomain::grid(m));
        Self::thresholds_above_on(domain)
    }

    /// Same family over an arbitrary coordinate domain: one hypothesis per
    /// cut position, `1[x > c]` with cuts below, between, and above coords.
    pub fn thresholds_above_on(domain: Arc<FiniteDomain>) -> Self {
        let m = domain.len();
        let mut table = Vec::with_capacity(m + 1);
        let mut names = Vec::with_capacity(m + 1);
        // cut k: points with index >= k are labeled 1
        for k in 0..=m {
            let row: Vec<Rat> = (0..m)
                .map(|i| if i >= k { rat_int(1) } else { rat_int(0) })
                .collect();
            table.push(row);
            names.push(format!("above:{k}"));
        }
        Self {
            domain,
            table,
            names,
        }
    }

    /// Mirrored thresholds `h_k(x) = 1[x <= k]` (label 1 below the cut).
    pub fn thresholds_below(m: usize) -> Self {
        let domain = Arc::new(FiniteDomain::grid(m));
        Self::thresholds_below_on(domain)
    }

    pub fn thresholds_below_on(domain: Arc<FiniteDomain>) -> Self {
        let m = domain.len();
        let mut table = Vec::with_capacity(m + 1);
        let mut names = Vec::with_capacity(m + 1);
        // cut k: points with index < k are labeled 1
        for k in 0..=m {
            let row: Vec<Rat> = (0..m)
                .map(|i| if i < k { rat_int(1) } else { rat_int(0) })
                .collect();
            table.push(row);
            names.push(format!("below:{k}"));
        }
        Self {
            domain,
            table,
            names,
        }
    }

    /// Every binary labeling of a `k`-point grid; VC dimension `k`.
    pub fn full_binary(k: usize) -> Self {
        assert!(k <= 16, "full class limited to 16 points");
        let domain = Arc::new(FiniteDomain::grid(k));
        let mut table = Vec::with_capacity(1 << k);
        let mut names = Vec::with_capacity(1 << k);
        for bits in 0..(1u32 << k) {
            let row: Vec<Rat> = (0..k)
                .map(|i| rat_int(((bits >> i) & 1) as i64))
                .collect();
            table.push(row);
            names.push(format!("f{bits:0width$b}", width = k));
        }
        Self {
            domain,
            table,
            names,
        }
    }

    pub fn domain(&self) -> &Arc<FiniteDomain> {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn predict(&self, row: usize, point: PointIdx) -> Rat {
        self.table[row][point.0]
    }

    pub fn row(&self, row: usize) -> &[Rat] {
        &self.table[row]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rat]> {
        self.table.iter().map(|r| r.as_slice())
    }

    /// Distinct restrictions of the table rows to `points`, in order of
    /// first appearance over the rows (order-stable).
    pub fn project_dichotomies(&self, points: &[PointIdx]) -> Vec<Vec<Rat>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for row in &self.table {
            let v: Vec<Rat> = points.iter().map(|p| row[p.0]).collect();
            if seen.insert(v.clone()) {
                out.push(v);
            }
        }
        out
    }

    /// Does the class realize all `2^k` binary labelings of `points`?
    pub fn shatters(&self, points: &[PointIdx]) -> bool {
        let k = points.len();
        if k >= 64 || self.table.len() < (1usize << k) {
            return false;
        }
        let patterns: HashSet<Vec<Rat>> = self
            .table
            .iter()
            .map(|row| points.iter().map(|p| row[p.0]).collect())
            .collect();
        if patterns.len() < (1 << k) {
            return false;
        }
        let zero = rat_int(0);
        let one = rat_int(1);
        (0..(1u64 << k)).all(|bits| {
            let want: Vec<Rat> = (0..k)
                .map(|i| if (bits >> i) & 1 == 1 { one } else { zero })
                .collect();
            patterns.contains(&want)
        })
    }

    /// Largest `m` such that some `m`-subset of the domain is shattered.
    /// Enumeration-capped; callers raise the cap explicitly when they mean it.
    pub fn vc_dimension_capped(&self, cap: usize) -> Result<usize> {
        let n = self.domain.len();
        if n > cap {
            return Err(Error::Budget {
                required: n as u128,
                budget: cap as u64,
            });
        }
        let points: Vec<PointIdx> = self.domain.points().collect();
        let mut best = 0usize;
        for m in 1..=n {
            if (1usize << m) > self.table.len() {
                break;
            }
            let mut found = false;
            let mut subset: Vec<usize> = (0..m).collect();
            loop {
                let chosen: Vec<PointIdx> = subset.iter().map(|&i| points[i]).collect();
                if self.shatters(&chosen) {
                    found = true;
                    break;
                }
                if !next_combination(&mut subset, n) {
                    break;
                }
            }
            if found {
                best = m;
            } else {
                break;
            }
        }
        Ok(best)
    }

    pub fn vc_dimension(&self) -> Result<usize> {
        self.vc_dimension_capped(DEFAULT_VC_CAP)
    }
}

/// Advance `subset` (strictly increasing indices into `0..n`) to the next
/// lexicographic combination; false when exhausted.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let m = subset.len();
    let mut i = m;
    while i > 0 {
        i -= 1;
        if subset[i] < i + n - m {
            subset[i] += 1;
            for j in i + 1..m {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[Vec<Rat>]) -> Vec<String> {
        v.iter()
            .map(|row| {
                row.iter()
                    .map(|r| if *r == rat_int(1) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn threshold_projections_form_a_path() {
        let class = FiniteHypothesisClass::thresholds_above(3);
        let pts = [PointIdx(0), PointIdx(1), PointIdx(2)];
        let vs = class.project_dichotomies(&pts);
        assert_eq!(labels(&vs), vec!["111", "011", "001", "000"]);
    }

    #[test]
    fn below_thresholds_mirror() {
        let class = FiniteHypothesisClass::thresholds_below(3);
        let pts = [PointIdx(0), PointIdx(1), PointIdx(2)];
        let vs = class.project_dichotomies(&pts);
        assert_eq!(labels(&vs), vec!["000", "100", "110", "111"]);
    }

    #[test]
    fn vc_dimension_thresholds_is_one() {
        for m in 2..=6 {
            let class = FiniteHypothesisClass::thresholds_above(m);
            assert_eq!(class.vc_dimension().unwrap(), 1, "m={m}");
        }
    }

    #[test]
    fn vc_dimension_full_class() {
        let class = FiniteHypothesisClass::full_binary(3);
        assert_eq!(class.vc_dimension().unwrap(), 3);
        assert_eq!(class.len(), 8);
    }

    #[test]
    fn vc_dimension_single_hypothesis_is_zero() {
        let domain = Arc::new(FiniteDomain::grid(3));
        let class = FiniteHypothesisClass::new(
            domain,
            vec![vec![rat_int(0), rat_int(1), rat_int(0)]],
            vec!["h".into()],
        )
        .unwrap();
        assert_eq!(class.vc_dimension().unwrap(), 0);
        assert_eq!(
            class
                .project_dichotomies(&[PointIdx(0), PointIdx(2)])
                .len(),
            1
        );
    }

    #[test]
    fn vc_cap_is_enforced() {
        let class = FiniteHypothesisClass::thresholds_above(8);
        assert!(matches!(
            class.vc_dimension_capped(4),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn projection_bounds() {
        let class = FiniteHypothesisClass::full_binary(3);
        let pts = [PointIdx(0), PointIdx(1)];
        let vs = class.project_dichotomies(&pts);
        assert_eq!(vs.len(), 4); // min(|class|, 2^k) = 4
    }

    #[test]
    fn rejects_duplicate_rows() {
        let domain = Arc::new(FiniteDomain::grid(2));
        let row = vec![rat_int(0), rat_int(1)];
        assert!(FiniteHypothesisClass::new(
            domain,
            vec![row.clone(), row],
            vec!["a".into(), "b".into()]
        )
        .is_err());
    }
}
