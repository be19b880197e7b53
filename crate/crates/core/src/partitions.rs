//! Partitions, their statistics, and monodromy color vectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};

/// Weakly decreasing vector of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (0..first).map(|i| self.parts.iter().filter(|&&p| p > i).count() as u32).collect();
        Partition { parts }
    }

    /// `|mu| + sum_i (mu_i^2 - 2 i mu_i)` with `i` starting at 1.
    pub fn kappa(&self) -> i64 {
        let mut k = i64::from(self.size());
        for (i, &p) in self.parts.iter().enumerate() {
            let (p, i) = (i64::from(p), i as i64 + 1);
            k += p * p - 2 * i * p;
        }
        k
    }

    /// Order of the centralizer of a permutation of this cycle type.
    pub fn z(&self) -> u64 {
        let mut z: u64 = 1;
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let mut m = 0u64;
            while i < self.parts.len() && self.parts[i] == p {
                m += 1;
                i += 1;
                z *= m * u64::from(p);
            }
        }
        z
    }

    pub fn hooks(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut h = Vec::with_capacity(self.size() as usize);
        for (r, &row) in self.parts.iter().enumerate() {
            for c in 0..row {
                let arm = row - c - 1;
                let leg = conj.parts[c as usize] - r as u32 - 1;
                h.push(arm + leg + 1);
            }
        }
        h
    }

    /// Boxes as (column, row), both 0-based.
    pub fn boxes(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.parts.iter().enumerate().flat_map(|(r, &row)| (0..row).map(move |c| (c, r as u32)))
    }

    /// `A_nu(k, n) = sum over boxes of floor((i + k) / n)` where `i` is the
    /// 0-based column index of the box.
    pub fn a_stat(&self, k: u32, n: u32) -> u64 {
        self.a_stat_with(k, n, BoxAxis::Column)
    }

    pub fn a_stat_with(&self, k: u32, n: u32, axis: BoxAxis) -> u64 {
        assert!(n > 0 && k < n);
        self.boxes()
            .map(|(c, r)| {
                let i = match axis {
                    BoxAxis::Column => c,
                    BoxAxis::Row => r,
                };
                u64::from((i + k) / n)
            })
            .sum()
    }

    /// Multiplicity of each part size `1..=max`.
    pub fn multiplicities(&self) -> Vec<u32> {
        let top = self.parts.first().copied().unwrap_or(0) as usize;
        let mut m = vec![0; top + 1];
        for &p in &self.parts {
            m[p as usize] += 1;
        }
        m
    }

    /// Label like `2+1+1`; the empty partition is `0`.
    pub fn label(&self) -> String {
        if self.parts.is_empty() {
            return "0".into();
        }
        self.parts.iter().map(u32::to_string).collect::<Vec<_>>().join("+")
    }
}

/// Which box coordinate feeds the A-statistic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxAxis {
    Column,
    Row,
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Parses `2,1,1`, `2+1+1`, or the empty string / `0` for the empty partition.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Partition> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() || s == "0" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split([',', '+'])
            .map(|t| t.trim().parse::<u32>().map_err(|_| usage(format!("bad partition part {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if parts.contains(&0) {
            return Err(usage("partition parts must be positive"));
        }
        Ok(Partition::new(parts))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Partition> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(usage("partition must be weakly decreasing with positive parts"));
        }
        Ok(Partition { parts })
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

/// All partitions of `d`, largest first in reverse lexicographic order.
pub fn partitions_of(d: u32) -> Vec<Partition> {
    fn rec(rest: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(cap)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// Multiset of nontrivial elements of `Z_a`, sorted decreasingly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColorVector {
    a: u32,
    entries: Vec<u32>,
}

impl ColorVector {
    pub fn new(a: u32, mut entries: Vec<u32>) -> Result<ColorVector> {
        if a == 0 {
            return Err(usage("modulus must be positive"));
        }
        if let Some(bad) = entries.iter().find(|&&g| g == 0 || g >= a) {
            return Err(usage(format!("{bad} is not a nontrivial element of Z_{a}")));
        }
        entries.sort_unstable_by(|x, y| y.cmp(x));
        Ok(ColorVector { a, entries })
    }

    pub fn empty(a: u32) -> ColorVector {
        ColorVector { a, entries: Vec::new() }
    }

    pub fn modulus(&self) -> u32 {
        self.a
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sum(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// Product of factorials of multiplicities.
    pub fn aut(&self) -> u64 {
        let mut counts = vec![0u64; self.a as usize];
        for &g in &self.entries {
            counts[g as usize] += 1;
        }
        counts.iter().map(|&m| (1..=m).product::<u64>()).product()
    }

    /// Exponents of `x_1, ..., x_{a-1}` in `x_gamma`.
    pub fn x_exponents(&self) -> Vec<i64> {
        let mut e = vec![0; self.a.saturating_sub(1) as usize];
        for &g in &self.entries {
            e[g as usize - 1] += 1;
        }
        e
    }
}

impl fmt::Display for ColorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.entries.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All color vectors in `Z_a` of length at most `max_len`, shortest first.
pub fn gamma_vectors(a: u32, max_len: usize) -> Vec<ColorVector> {
    fn rec(a: u32, len: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<ColorVector>) {
        if cur.len() == len {
            out.push(ColorVector { a, entries: cur.clone() });
            return;
        }
        for g in (1..=cap).rev() {
            cur.push(g);
            rec(a, len, g, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![ColorVector::empty(a)];
    if a < 2 {
        return out;
    }
    for len in 1..=max_len {
        let mut layer = Vec::new();
        rec(a, len, a - 1, &mut Vec::new(), &mut layer);
        layer.reverse();
        out.extend(layer);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    /// Counts partitions of `d` by brute force over weakly decreasing sequences
    /// checked one part-vector at a time.
    fn brute_count(d: u32) -> usize {
        let mut count = 0;
        let mut stack = vec![(d, d)];
        while let Some((rest, cap)) = stack.pop() {
            if rest == 0 {
                count += 1;
                continue;
            }
            for q in 1..=rest.min(cap) {
                stack.push((rest - q, q));
            }
        }
        count
    }

    #[test]
    fn counts() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(8).len(), 22);
        for d in 0..=10 {
            assert_eq!(partitions_of(d).len(), brute_count(d));
        }
    }

    #[test]
    fn statistics() {
        assert_eq!(p(&[1]).kappa(), 0);
        assert_eq!(p(&[2]).kappa(), 2);
        assert_eq!(p(&[1, 1]).kappa(), -2);
        assert_eq!(p(&[2, 1]).kappa(), 0);
        assert_eq!(p(&[1]).z(), 1);
        assert_eq!(p(&[1, 1]).z(), 2);
        assert_eq!(p(&[2, 1]).z(), 2);
        assert_eq!(p(&[2, 2, 1]).z(), 8);
        let mut h = p(&[2, 1]).hooks();
        h.sort_unstable();
        assert_eq!(h, vec![1, 1, 3]);
        assert_eq!(p(&[1]).hooks(), vec![1]);
        let prod: u32 = p(&[2, 1]).hooks().iter().product();
        assert_eq!(6 / prod, 2);
    }

    #[test]
    fn a_statistic() {
        assert_eq!(Partition::empty().a_stat(0, 3), 0);
        assert_eq!(p(&[1]).a_stat(0, 1), 0);
        assert_eq!(p(&[2]).a_stat(1, 2), 1);
        assert_eq!(p(&[1, 1]).a_stat(1, 2), 0);
        assert_eq!(p(&[1, 1]).a_stat_with(1, 2, BoxAxis::Row), 1);
        for mu in partitions_of(5) {
            let n: u64 = mu.boxes().map(|(c, _)| u64::from(c)).sum();
            assert_eq!(mu.a_stat(0, 1), n);
        }
    }

    #[test]
    fn colors() {
        assert_eq!(ColorVector::new(2, vec![1, 1, 1]).unwrap().aut(), 6);
        assert!(ColorVector::new(3, vec![0]).is_err());
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        let got: Vec<Vec<u32>> = gamma_vectors(3, 2).iter().map(|g| g.entries().to_vec()).collect();
        assert_eq!(got, vec![vec![], vec![1], vec![2], vec![1, 1], vec![2, 1], vec![2, 2]]);
        assert_eq!(gamma_vectors(1, 3), vec![ColorVector::empty(1)]);
    }

    #[test]
    fn parsing() {
        assert_eq!("2,1".parse::<Partition>().unwrap(), p(&[2, 1]));
        assert_eq!("1+2".parse::<Partition>().unwrap(), p(&[2, 1]));
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert!("2,x".parse::<Partition>().is_err());
        assert_eq!(p(&[2, 1, 1]).label(), "2+1+1");
        let j = serde_json::to_string(&p(&[3, 1])).unwrap();
        assert_eq!(j, "[3,1]");
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }
}
