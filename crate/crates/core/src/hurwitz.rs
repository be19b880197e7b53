//! The Hurwitz kernel `Phi_{nu,mu}(lambda)`, double Hurwitz numbers, and a
//! brute-force factorization count over `S_d`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::characters::character_table;
use crate::error::{usage, Error, Result};
use crate::exactnum::{format_rational, int, rat, CycloField, CycloNum, Rational};
use crate::partitions::{partitions_of, Partition};
use crate::report::Report;
use crate::series::{Ring, Series, VarSpec};

/// `Phi_{nu,mu}(lambda) = sum_eta c_eta exp(kappa_eta lambda / 2)`, kept as
/// the exact list of `(kappa, c)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiKernel {
    nu: Partition,
    mu: Partition,
    terms: BTreeMap<i64, Rational>,
}

pub fn phi(nu: &Partition, mu: &Partition) -> Result<PhiKernel> {
    if nu.size() != mu.size() {
        return Err(usage(format!("|{nu}| != |{mu}|")));
    }
    let table = character_table(nu.size());
    let zz = Rational::from_integer(BigInt::from(nu.z()) * BigInt::from(mu.z()));
    let mut terms = BTreeMap::new();
    for eta in table.partitions() {
        let c = table.get(eta, nu)? * table.get(eta, mu)?;
        if c != 0 {
            *terms.entry(eta.kappa()).or_insert_with(Rational::zero) += int(c) / &zz;
        }
    }
    terms.retain(|_, c: &mut Rational| !c.is_zero());
    Ok(PhiKernel { nu: nu.clone(), mu: mu.clone(), terms })
}

impl PhiKernel {
    pub fn nu(&self) -> &Partition {
        &self.nu
    }

    pub fn mu(&self) -> &Partition {
        &self.mu
    }

    /// `(kappa, c)` pairs with nonzero `c`.
    pub fn exponentials(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// `[lambda^r] Phi = sum c (kappa/2)^r / r!`.
    pub fn coefficient(&self, r: u32) -> Rational {
        let fact: BigInt = (1..=r).map(BigInt::from).product();
        let mut acc = Rational::zero();
        for (&k, c) in &self.terms {
            acc += c * num_traits::pow(rat(k, 2), r as usize);
        }
        acc / Rational::from_integer(fact)
    }

    /// `Phi(s * var)` expanded in `ring`.
    pub fn expand(&self, ring: &Arc<Ring>, var: &str, s: &CycloNum) -> Result<Series> {
        let mut out = Series::zero(ring);
        for (&k, c) in &self.terms {
            let rate = s.scale(&rat(k, 2));
            let e = Series::exp_linear(ring, var, &rate)?;
            out = out.add(&e.scale_rational(c))?;
        }
        if self.terms.is_empty() {
            // keep the truncation even for the zero kernel
            out = Series::univariate(ring, var, |_| CycloNum::zero(ring.field()))?;
        }
        Ok(out)
    }
}

/// Checks `Phi_{nu mu}(l1 + l2) = sum_sigma Phi_{nu sigma}(l1) z_sigma Phi_{sigma mu}(l2)`
/// for all `nu, mu |- d` up to joint degree `order`.
pub fn phi_compose_check(d: u32, order: i64) -> Result<Report> {
    let field = CycloField::new(4);
    let ring = Ring::builder(&field)
        .var(VarSpec::integer("l1", 0, order))
        .var(VarSpec::integer("l2", 0, order))
        .cap(&[("l1", 1), ("l2", 1)], order)
        .build()?;
    let one = CycloNum::one(&field);
    let parts = partitions_of(d);
    let mut kernels: HashMap<(usize, usize), PhiKernel> = HashMap::new();
    for (i, nu) in parts.iter().enumerate() {
        for (j, mu) in parts.iter().enumerate() {
            kernels.insert((i, j), phi(nu, mu)?);
        }
    }
    let mut report = Report::new(format!("phi-compose d={d}"));
    for (i, nu) in parts.iter().enumerate() {
        for (j, mu) in parts.iter().enumerate() {
            let k = &kernels[&(i, j)];
            let mut lhs = Series::zero(&ring);
            for (kappa, c) in k.exponentials() {
                let rate = CycloNum::from_rational(&field, rat(kappa, 2));
                let e = Series::exp_linear(&ring, "l1", &rate)?.mul(&Series::exp_linear(&ring, "l2", &rate)?)?;
                lhs = lhs.add(&e.scale_rational(c))?;
            }
            let mut rhs = Series::zero(&ring);
            for (s, sigma) in parts.iter().enumerate() {
                let left = kernels[&(i, s)].expand(&ring, "l1", &one)?;
                let right = kernels[&(s, j)].expand(&ring, "l2", &one)?;
                rhs = rhs.add(&left.mul(&right)?.scale_rational(&int(sigma.z() as i64)))?;
            }
            let diff = lhs.first_difference(&rhs, &ring)?;
            report.check(diff.is_none(), || format!("nu={nu} mu={mu} {}", diff.unwrap()));
        }
    }
    Ok(report)
}

/// Disconnected double Hurwitz number `H_{chi,nu,mu} = r! [lambda^r] Phi_{nu mu}`
/// with `r = -chi + l(nu) + l(mu)`.
pub fn burnside_extract(chi_euler: i64, nu: &Partition, mu: &Partition) -> Result<Rational> {
    if chi_euler % 2 != 0 {
        return Err(usage("Euler characteristic must be even"));
    }
    let r = -chi_euler + nu.len() as i64 + mu.len() as i64;
    if r < 0 {
        return Err(usage(format!("no simple branch points for chi={chi_euler}: r={r} < 0")));
    }
    let k = phi(nu, mu)?;
    let fact: BigInt = (1..=r).map(BigInt::from).product();
    Ok(k.coefficient(r as u32) * Rational::from_integer(fact))
}

/// One compared value of the Burnside suite.
#[derive(Clone, Debug, Serialize)]
pub struct HurwitzRow {
    pub nu: Partition,
    pub mu: Partition,
    pub r: u32,
    pub chi: i64,
    pub value_burnside: String,
    pub value_oracle: String,
}

/// `burnside_extract` against the factorization count for all `nu, mu |- d`
/// and `r <= r_max`.
pub fn burnside_check(d: u32, r_max: u32) -> Result<(Report, Vec<HurwitzRow>)> {
    let mut report = Report::new(format!("burnside d={d} r<={r_max}"));
    let mut rows = Vec::new();
    let parts = partitions_of(d);
    for nu in &parts {
        for mu in &parts {
            for r in 0..=r_max {
                let chi = nu.len() as i64 + mu.len() as i64 - i64::from(r);
                if chi % 2 != 0 {
                    continue;
                }
                let b = burnside_extract(chi, nu, mu)?;
                let o = hurwitz_oracle(nu, mu, r)?;
                report.check(b == o, || format!("nu={nu} mu={mu} r={r}: {b} != {o}"));
                rows.push(HurwitzRow {
                    nu: nu.clone(),
                    mu: mu.clone(),
                    r,
                    chi,
                    value_burnside: format_rational(&b),
                    value_oracle: format_rational(&o),
                });
            }
        }
    }
    Ok((report, rows))
}

fn all_permutations(d: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..d as u8).collect();
    fn rec(k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

fn cycle_type(p: &[u8]) -> Partition {
    let mut seen = vec![false; p.len()];
    let mut parts = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::new(parts)
}

/// `(1/d!) #{(sigma, tau_1..tau_r, sigma') : sigma tau_1 ... tau_r sigma' = 1}`
/// with `sigma` of type `nu`, `sigma'` of type `mu`, each `tau_i` a transposition.
pub fn hurwitz_oracle(nu: &Partition, mu: &Partition, r: u32) -> Result<Rational> {
    let d = nu.size();
    if mu.size() != d {
        return Err(usage(format!("|{nu}| != |{mu}|")));
    }
    if d > 4 || r > 6 {
        return Err(Error::Guard(format!("factorization oracle limited to d <= 4, r <= 6 (got d={d}, r={r})")));
    }
    let n = d as usize;
    let perms = all_permutations(n);
    let index: HashMap<&[u8], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let mut transpositions = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut t: Vec<u8> = (0..n as u8).collect();
            t.swap(i, j);
            transpositions.push(t);
        }
    }
    // counts[g] = number of ways to reach g = sigma tau_1 ... tau_k
    let mut counts: Vec<BigInt> =
        perms.iter().map(|p| if cycle_type(p) == *nu { BigInt::one() } else { BigInt::zero() }).collect();
    for _ in 0..r {
        let mut next = vec![BigInt::zero(); perms.len()];
        for (g, c) in perms.iter().zip(&counts) {
            if c.is_zero() {
                continue;
            }
            for t in &transpositions {
                let prod: Vec<u8> = (0..n).map(|i| g[t[i] as usize]).collect();
                next[index[prod.as_slice()]] += c;
            }
        }
        counts = next;
    }
    // sigma' = (sigma tau...)^-1 has the same cycle type as the product
    let total: BigInt = perms.iter().zip(&counts).filter(|(p, _)| cycle_type(p) == *mu).map(|(_, c)| c.clone()).sum();
    let fact: BigInt = (1..=d).map(BigInt::from).product();
    Ok(Rational::new(total, fact))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn kernel_values() {
        let k = phi(&p(&[1]), &p(&[1])).unwrap();
        assert_eq!(k.coefficient(0), int(1));
        assert_eq!(k.coefficient(1), int(0));
        // cosh(lambda)/2
        let k = phi(&p(&[2]), &p(&[2])).unwrap();
        assert_eq!(k.coefficient(0), rat(1, 2));
        assert_eq!(k.coefficient(2), rat(1, 4));
        assert_eq!(k.coefficient(4), rat(1, 48));
        assert_eq!(k.coefficient(3), int(0));
    }

    #[test]
    fn initial_value() {
        for d in 1..=5 {
            for nu in partitions_of(d) {
                for mu in partitions_of(d) {
                    let want = if nu == mu { rat(1, nu.z() as i64) } else { int(0) };
                    assert_eq!(phi(&nu, &mu).unwrap().coefficient(0), want);
                }
            }
        }
    }

    #[test]
    fn burnside_values() {
        assert_eq!(burnside_extract(2, &p(&[1]), &p(&[1])).unwrap(), int(1));
        assert_eq!(burnside_extract(2, &p(&[2]), &p(&[2])).unwrap(), rat(1, 2));
        assert_eq!(burnside_extract(0, &p(&[2]), &p(&[2])).unwrap(), rat(1, 2));
        assert!(burnside_extract(6, &p(&[1]), &p(&[1])).is_err());
    }

    #[test]
    fn oracle_values() {
        assert_eq!(hurwitz_oracle(&p(&[1]), &p(&[1]), 0).unwrap(), int(1));
        assert_eq!(hurwitz_oracle(&p(&[2]), &p(&[2]), 0).unwrap(), rat(1, 2));
        assert_eq!(hurwitz_oracle(&p(&[2]), &p(&[2]), 2).unwrap(), rat(1, 2));
        assert!(matches!(hurwitz_oracle(&p(&[5]), &p(&[5]), 0), Err(Error::Guard(_))));
    }

    #[test]
    fn burnside_matches_oracle_small() {
        let (r, rows) = burnside_check(2, 3).unwrap();
        assert!(r.passed, "{:?}", r.first_failure);
        assert_eq!(rows.len(), r.checked);
    }

    #[test]
    fn composition_small() {
        assert!(phi_compose_check(1, 4).unwrap().passed);
        assert!(phi_compose_check(2, 6).unwrap().passed);
    }

    #[test]
    fn expansion_matches_coefficients() {
        let field = CycloField::new(4);
        let ring = Ring::builder(&field).var(VarSpec::integer("l", 0, 6)).build().unwrap();
        let k = phi(&p(&[2, 1]), &p(&[3])).unwrap();
        let s = k.expand(&ring, "l", &CycloNum::one(&field)).unwrap();
        for r in 0..=6 {
            assert_eq!(s.coefficient(&[int(r)]).unwrap(), CycloNum::from_rational(&field, k.coefficient(r as u32)));
        }
    }
}
