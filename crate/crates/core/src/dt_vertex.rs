//! The DT side: reduced one-leg vertex in closed form, a colored 3d-partition
//! enumerator, and the change of variables into `(lambda, x)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{character_table, powersum_colored, token_ring, AlphabetSign, TokenWindow};
use crate::error::{usage, Error, Result};
use crate::exactnum::{int, rat, CycloField, CycloNum, Rational};
use crate::partitions::{partitions_of, BoxAxis, Partition};
use crate::report::Report;
use crate::series::{Ring, Series, VarSpec};

pub fn x_name(i: u32) -> String {
    format!("x{i}")
}

/// Ring in `lambda` and `x_1, ..., x_{a-1}` with a total x-degree cap.
pub fn lambda_ring(a: u32, lambda: (i64, i64), x_deg: i64) -> Result<Arc<Ring>> {
    let field = CycloField::for_modulus(a);
    let mut b = Ring::builder(&field).var(VarSpec::integer("lambda", lambda.0, lambda.1));
    let names: Vec<String> = (1..a).map(x_name).collect();
    for n in &names {
        b = b.var(VarSpec::integer(n, 0, x_deg)).grade(n, 1);
    }
    if a > 1 {
        let w: Vec<(&str, i64)> = names.iter().map(|n| (n.as_str(), 1)).collect();
        b = b.cap(&w, x_deg);
    }
    b.build()
}

/// `q^r q_1^{s_1} ... q_{a-1}^{s_{a-1}}`, `r` in `(1/2)Z`, `s_l` in `(1/a)Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TokenMonomial {
    pub r: Rational,
    pub s: Vec<Rational>,
}

impl TokenMonomial {
    pub fn one(a: u32) -> TokenMonomial {
        TokenMonomial { r: Rational::zero(), s: vec![Rational::zero(); a as usize - 1] }
    }

    /// `(q^{1/2} prod_l q_l^{-l/a})^d`.
    pub fn composite(a: u32, d: i64) -> TokenMonomial {
        TokenMonomial { r: rat(d, 2), s: (1..a).map(|l| rat(-d * i64::from(l), i64::from(a))).collect() }
    }

    pub fn mul(&self, other: &TokenMonomial) -> TokenMonomial {
        TokenMonomial { r: &self.r + &other.r, s: self.s.iter().zip(&other.s).map(|(x, y)| x + y).collect() }
    }

    fn exponents(&self) -> Vec<Rational> {
        std::iter::once(self.r.clone()).chain(self.s.iter().cloned()).collect()
    }

    /// Splits into `composite^e` times integer exponents, `0 <= e < lcm(2, a)`.
    pub fn split_composite(&self) -> Result<(i64, i64, Vec<i64>)> {
        let a = self.s.len() as i64 + 1;
        let period = 2.lcm(&a);
        'search: for e in 0..period {
            let n = &self.r - rat(e, 2);
            if !n.is_integer() {
                continue;
            }
            let mut m = Vec::with_capacity(self.s.len());
            for (l, s) in self.s.iter().enumerate() {
                let v = s + rat(e * (l as i64 + 1), a);
                if !v.is_integer() {
                    continue 'search;
                }
                m.push(to_i64(&v)?);
            }
            return Ok((e, to_i64(&n)?, m));
        }
        Err(Error::Convention(format!(
            "token q^{} q_l^{:?} is not a power of q^(1/2) prod q_l^(-l/a) times an integral monomial",
            self.r, self.s
        )))
    }
}

fn to_i64(r: &Rational) -> Result<i64> {
    i64::try_from(r.to_integer()).map_err(|_| usage("exponent out of range"))
}

/// One summand `c * monomial * p_rho(alphabet)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexTerm {
    pub coeff: Rational,
    pub monomial: TokenMonomial,
    pub sign: AlphabetSign,
    pub powersums: Partition,
}

/// Finite combination of token monomials times power sums of the colored
/// alphabet. Kept symbolic so it can be expanded either as a `q`-series or
/// through the change of variables.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexExpr {
    a: u32,
    terms: Vec<VertexTerm>,
}

impl VertexExpr {
    pub fn zero(a: u32) -> VertexExpr {
        VertexExpr { a, terms: Vec::new() }
    }

    pub fn monomial(a: u32, m: TokenMonomial, coeff: Rational) -> VertexExpr {
        let t = VertexTerm { coeff, monomial: m, sign: AlphabetSign::Plus, powersums: Partition::empty() };
        VertexExpr { a, terms: vec![t] }
    }

    /// `s_nu` on the colored alphabet with the given sign.
    pub fn schur(a: u32, nu: &Partition, sign: AlphabetSign) -> VertexExpr {
        let table = character_table(nu.size());
        let terms = table
            .partitions()
            .iter()
            .filter_map(|rho| {
                let c = table.get(nu, rho).ok()?;
                (c != 0).then(|| VertexTerm {
                    coeff: rat(c, rho.z() as i64),
                    monomial: TokenMonomial::one(a),
                    sign,
                    powersums: rho.clone(),
                })
            })
            .collect();
        VertexExpr { a, terms }
    }

    pub fn modulus(&self) -> u32 {
        self.a
    }

    pub fn terms(&self) -> &[VertexTerm] {
        &self.terms
    }

    pub fn concat(mut self, other: VertexExpr) -> VertexExpr {
        self.terms.extend(other.terms);
        self
    }

    /// Multiplies every term by `c * m`.
    pub fn times(mut self, m: &TokenMonomial, c: &Rational) -> VertexExpr {
        for t in &mut self.terms {
            t.monomial = t.monomial.mul(m);
            t.coeff = &t.coeff * c;
        }
        self.terms.retain(|t| !t.coeff.is_zero());
        self
    }

    /// Expansion as a truncated series in a token ring.
    pub fn expand(&self, ring: &Arc<Ring>) -> Result<Series> {
        let mut cache: HashMap<(u32, AlphabetSign), Series> = HashMap::new();
        let mut out = Series::zero(ring);
        for t in &self.terms {
            let mut s = Series::monomial(
                ring,
                &t.monomial.exponents(),
                CycloNum::from_rational(ring.field(), t.coeff.clone()),
            )?;
            for &k in t.powersums.parts() {
                let key = (k, t.sign);
                if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
                    e.insert(powersum_colored(k, self.a, t.sign, ring)?);
                }
                s = s.mul(&cache[&key])?;
            }
            out = out.add(&s)?;
        }
        Ok(out)
    }
}

/// `q^{-A_nu(0,a)} prod_l q_l^{A_nu(0,a) - A_nu(l,a)}`.
pub fn a_monomial(nu: &Partition, a: u32, axis: BoxAxis) -> TokenMonomial {
    let a0 = nu.a_stat_with(0, a, axis) as i64;
    TokenMonomial { r: int(-a0), s: (1..a).map(|l| int(a0 - nu.a_stat_with(l, a, axis) as i64)).collect() }
}

/// Reduced one-leg vertex `V'_nu = (A-monomial) s_{nu'}(q_.)`.
pub fn reduced_vertex_closed(nu: &Partition, a: u32) -> VertexExpr {
    reduced_vertex_closed_with(nu, a, BoxAxis::Column)
}

pub fn reduced_vertex_closed_with(nu: &Partition, a: u32, axis: BoxAxis) -> VertexExpr {
    VertexExpr::schur(a, &nu.conjugate(), AlphabetSign::Plus).times(&a_monomial(nu, a, axis), &Rational::one())
}

/// Which box coordinate of the leg cross-section follows the columns of `nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegOrientation {
    /// Columns along `y`, rows along `z`; boxes colored by `(x - y) mod a`.
    ColumnsAlongY,
    /// Rows along `y`, columns along `z`.
    ColumnsAlongZ,
}

/// Renormalized per-color volume counts of colored 3d partitions with one leg.
pub type ColorCounts = BTreeMap<Vec<u32>, u64>;

pub const MAX_BOXES: u32 = 10;

/// Counts 3d partitions with leg `nu` along `x` by renormalized volume
/// (boxes outside the leg cylinder), refined by color, up to `budget` boxes.
pub fn enumerate_colored_3d(nu: &Partition, a: u32, budget: u32) -> Result<ColorCounts> {
    enumerate_colored_3d_with(nu, a, budget, LegOrientation::ColumnsAlongY)
}

type Cell = [u8; 3];

pub fn enumerate_colored_3d_with(nu: &Partition, a: u32, budget: u32, orient: LegOrientation) -> Result<ColorCounts> {
    if budget > MAX_BOXES {
        return Err(Error::Guard(format!("enumeration limited to {MAX_BOXES} boxes, got {budget}")));
    }
    if a == 0 {
        return Err(usage("modulus must be positive"));
    }
    let cells: HashSet<(u8, u8)> = nu
        .boxes()
        .map(|(c, r)| match orient {
            LegOrientation::ColumnsAlongY => (c as u8, r as u8),
            LegOrientation::ColumnsAlongZ => (r as u8, c as u8),
        })
        .collect();
    let in_leg = |b: &Cell| cells.contains(&(b[1], b[2]));
    let color = |b: &Cell| (i64::from(b[0]) - i64::from(b[1])).rem_euclid(i64::from(a)) as usize;
    let mut seeds: Vec<Cell> = vec![[0, 0, 0]];
    for &(y, z) in &cells {
        seeds.push([0, y + 1, z]);
        seeds.push([0, y, z + 1]);
    }
    let mut counts = ColorCounts::new();
    counts.insert(vec![0; a as usize], 1);
    let mut frontier: HashSet<Vec<Cell>> = [Vec::new()].into_iter().collect();
    for _ in 0..budget {
        let next: HashSet<Vec<Cell>> = frontier
            .par_iter()
            .flat_map_iter(|state| {
                let present: HashSet<Cell> = state.iter().copied().collect();
                let mut cand: HashSet<Cell> = seeds.iter().copied().collect();
                for b in state {
                    for k in 0..3 {
                        let mut c = *b;
                        c[k] += 1;
                        cand.insert(c);
                    }
                }
                let mut out = Vec::new();
                for c in cand {
                    if present.contains(&c) || in_leg(&c) {
                        continue;
                    }
                    let supported = (0..3).all(|k| {
                        if c[k] == 0 {
                            return true;
                        }
                        let mut p = c;
                        p[k] -= 1;
                        present.contains(&p) || in_leg(&p)
                    });
                    if supported {
                        let mut t = state.clone();
                        let pos = t.binary_search(&c).unwrap_err();
                        t.insert(pos, c);
                        out.push(t);
                    }
                }
                out
            })
            .collect();
        for state in &next {
            let mut e = vec![0u32; a as usize];
            for b in state {
                e[color(b)] += 1;
            }
            *counts.entry(e).or_insert(0) += 1;
        }
        frontier = next;
    }
    Ok(counts)
}

/// Token window wide enough for volume-`budget` comparisons.
pub fn volume_window(budget: i64) -> TokenWindow {
    TokenWindow { q: (int(0), int(budget)), ql: (int(-budget), int(budget)), volume: Some(budget) }
}

/// Enumerator counts as a token series: color counts `n_c` become
/// `q^{n_0} prod_l q_l^{n_l - n_0}`.
pub fn counts_to_series(counts: &ColorCounts, ring: &Arc<Ring>) -> Result<Series> {
    let mut s = Series::zero(ring);
    for (e, &c) in counts {
        let n0 = i64::from(e[0]);
        let mut exps = vec![int(n0)];
        exps.extend(e[1..].iter().map(|&n| int(i64::from(n) - n0)));
        let term = Series::monomial(ring, &exps, CycloNum::from_int(ring.field(), c as i64))?;
        s = s.add(&term)?;
    }
    Ok(s.with_cap_precision())
}

/// Sums counts by total volume.
pub fn specialize_counts(counts: &ColorCounts) -> Vec<u64> {
    let top = counts.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0) as usize;
    let mut out = vec![0; top + 1];
    for (e, &c) in counts {
        out[e.iter().sum::<u32>() as usize] += c;
    }
    out
}

/// Coefficients of `t^0 .. t^n` after sending every color variable to `t`
/// (`q -> t^a`, `q_l -> t`).
pub fn specialize_series(s: &Series, a: u32, n: i64) -> Result<Vec<CycloNum>> {
    let window = token_ring(a, &TokenWindow { volume: Some(n), ..wide_window(s) })?;
    let r = s.restrict(&window)?;
    let mut out = vec![CycloNum::zero(s.field()); n as usize + 1];
    for (e, c) in r.terms() {
        let v: Rational = window
            .exponents(e)
            .iter()
            .enumerate()
            .map(|(i, x)| if i == 0 { x * int(i64::from(a)) } else { x.clone() })
            .sum();
        if !v.is_integer() || v.is_negative() {
            return Err(usage("specialization needs integral nonnegative volumes"));
        }
        out[to_i64(&v)? as usize] += c;
    }
    Ok(out)
}

fn wide_window(s: &Series) -> TokenWindow {
    let vars = s.ring().vars();
    let known = |v: &VarSpec| {
        let hi = s.precision(v.name()).map_or(v.max_exponent(), |p| p.min(v.max_exponent()));
        (v.min_exponent(), hi)
    };
    let q = known(&vars[0]);
    let ql = vars[1..].iter().map(known).reduce(|x, y| (x.0.max(y.0), x.1.min(y.1))).unwrap_or((int(0), int(0)));
    TokenWindow { q, ql, volume: None }
}

/// Compares `V_nu / V_empty` from the enumerator with the closed form, per
/// color, through total renormalized volume `budget`.
pub fn leg_ratio_check(nu: &Partition, a: u32, budget: u32) -> Result<Report> {
    let n = i64::from(budget);
    let win = token_ring(a, &volume_window(n))?;
    let leg = counts_to_series(&enumerate_colored_3d(nu, a, budget)?, &win)?;
    let empty = counts_to_series(&enumerate_colored_3d(&Partition::empty(), a, budget)?, &win)?;
    let ratio = leg.mul(&empty.invert_graded()?)?;
    let closed = expand_closed(nu, a, n)?;
    let mut report = Report::new(format!("leg-ratio a={a} nu={nu}"));
    let diff = ratio.first_difference(&closed, &win)?;
    report.checked = ratio.restrict(&win)?.len().max(1);
    if let Some(m) = diff {
        report.fail(m.to_string());
    }
    Ok(report)
}

/// The closed form expanded on a token ring that determines every
/// coefficient of volume at most `budget`.
pub fn expand_closed(nu: &Partition, a: u32, budget: i64) -> Result<Series> {
    let shift = nu.a_stat(0, a) as i64;
    let spread = budget + i64::from(nu.size()) + shift + 2;
    let ring = token_ring(
        a,
        &TokenWindow { q: (int(-shift), int(budget + shift + 2)), ql: (int(-spread), int(spread)), volume: None },
    )?;
    reduced_vertex_closed(nu, a).expand(&ring)
}

/// Images of the DT tokens in a `(lambda, x)` ring:
/// `q -> -e^{i lambda}`, `q_l -> xi^{-1} exp(L_l(x))`, and the composite
/// `q^{1/2} prod q_l^{-l/a} -> -zeta_{4a}^{-(a-2)} xi^{-1} e^{i lambda/2} exp(-(1/a) sum omega^i x_i)`.
pub struct ChangeOfVars {
    a: u32,
    ring: Arc<Ring>,
    field: Arc<CycloField>,
    /// Coefficient of `x_i` in `L_l`, indexed `[l][i-1]`.
    linear: Vec<Vec<CycloNum>>,
    composite_linear: Vec<CycloNum>,
    composite_const: CycloNum,
}

impl ChangeOfVars {
    pub fn new(a: u32, ring: &Arc<Ring>) -> Result<ChangeOfVars> {
        let field = ring.field().clone();
        let a64 = i64::from(a);
        let omega = |k: i64| CycloNum::zeta(&field, 2 * a, k);
        let inv_a = rat(1, a64);
        let mut linear = vec![Vec::new()];
        for l in 1..a64 {
            let mut row = Vec::new();
            for i in 1..a64 {
                let c = &omega(-2 * i * l)? * &(&omega(i)? - &omega(-i)?);
                row.push(-c.scale(&inv_a));
            }
            linear.push(row);
        }
        let composite_linear = (1..a64).map(|i| Ok(-omega(i)?.scale(&inv_a))).collect::<Result<_>>()?;
        let composite_const = -&(&CycloNum::zeta(&field, 4 * a, -(a64 - 2))? * &CycloNum::zeta(&field, a, -1)?);
        Ok(ChangeOfVars { a, ring: ring.clone(), field, linear, composite_linear, composite_const })
    }

    fn exp_x(&self, coeffs: &[CycloNum], scale: i64) -> Result<Series> {
        if self.a == 1 || scale == 0 {
            return Ok(Series::one(&self.ring));
        }
        let mut lin = Series::zero(&self.ring);
        for (i, c) in coeffs.iter().enumerate() {
            let v = Series::var_power(&self.ring, &x_name(i as u32 + 1), &int(1), c.scale(&int(scale)))?;
            lin = lin.add(&v)?;
        }
        lin.exp()
    }

    fn exp_lambda(&self, rate: Rational) -> Result<Series> {
        Series::exp_linear(&self.ring, "lambda", &CycloNum::i_pow(&self.field, 1).scale(&rate))
    }

    /// Image of `q^n`.
    pub fn q_power(&self, n: i64) -> Result<Series> {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        Ok(self.exp_lambda(int(n))?.scale_rational(&int(sign)))
    }

    /// Image of `q_l^m`.
    pub fn ql_power(&self, l: u32, m: i64) -> Result<Series> {
        let c = CycloNum::zeta(&self.field, self.a, -m)?;
        Ok(self.exp_x(&self.linear[l as usize], m)?.scale(&c))
    }

    /// Image of the composite token to the power `e`.
    pub fn composite_power(&self, e: i64) -> Result<Series> {
        let c = self.composite_const.pow(e)?;
        Ok(self.exp_lambda(rat(e, 2))?.mul(&self.exp_x(&self.composite_linear, e)?)?.scale(&c))
    }

    pub fn monomial(&self, m: &TokenMonomial) -> Result<Series> {
        let (e, n, ms) = m.split_composite()?;
        let mut s = self.composite_power(e)?.mul(&self.q_power(n)?)?;
        for (l, &k) in ms.iter().enumerate() {
            if k != 0 {
                s = s.mul(&self.ql_power(l as u32 + 1, k)?)?;
            }
        }
        Ok(s)
    }

    /// Image of `p_k` on the alphabet: `sum_l T_l^k / (1 - (sign q)^k)`.
    pub fn powersum(&self, k: u32, sign: AlphabetSign) -> Result<Series> {
        let k64 = i64::from(k);
        let mut blocks = Series::zero(&self.ring);
        for l in 0..self.a {
            let mut t = Series::one(&self.ring);
            for m in l + 1..self.a {
                t = t.mul(&self.ql_power(m, k64)?)?;
            }
            blocks = blocks.add(&t)?;
        }
        let mut qk = self.q_power(k64)?;
        if sign == AlphabetSign::Minus && k % 2 == 1 {
            qk = qk.neg();
        }
        blocks.mul(&Series::one(&self.ring).sub(&qk)?.invert()?)
    }

    pub fn apply(&self, e: &VertexExpr) -> Result<Series> {
        if e.modulus() != self.a {
            return Err(usage("expression and change of variables disagree on a"));
        }
        let mut cache: HashMap<(u32, AlphabetSign), Series> = HashMap::new();
        let mut out = Series::zero(&self.ring);
        for t in e.terms() {
            let mut s = self.monomial(&t.monomial)?.scale_rational(&t.coeff);
            for &k in t.powersums.parts() {
                let key = (k, t.sign);
                if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
                    e.insert(self.powersum(k, t.sign)?);
                }
                s = s.mul(&cache[&key])?;
            }
            out = out.add(&s)?;
        }
        Ok(out)
    }
}

/// Applies the change of variables to `e` in `ring`.
pub fn change_of_vars(e: &VertexExpr, ring: &Arc<Ring>) -> Result<Series> {
    ChangeOfVars::new(e.modulus(), ring)?.apply(e)
}

/// The DT side of the correspondence for `mu`, term by term in `nu`:
/// `sum_nu (-1)^{A_0} q^{d/2 + A_0} prod_l q_l^{-dl/a + A_l - A_0} V'_nu(-q) chi_nu(mu)/z_mu`.
pub fn correspondence_rhs(a: u32, mu: &Partition) -> Result<VertexExpr> {
    let d = i64::from(mu.size());
    let table = character_table(mu.size());
    let target = TokenMonomial::composite(a, d);
    let mut out = VertexExpr::zero(a);
    for nu in partitions_of(mu.size()) {
        let c = table.get(&nu, mu)?;
        if c == 0 {
            continue;
        }
        let a0 = nu.a_stat(0, a) as i64;
        let prefactor = TokenMonomial {
            r: rat(d, 2) + int(a0),
            s: (1..a).map(|l| rat(-d * i64::from(l), i64::from(a)) + int(nu.a_stat(l, a) as i64 - a0)).collect(),
        };
        // V'_nu(-q): the monomial picks up (-1)^{-A_0}, the alphabet flips sign
        let mono = a_monomial(&nu, a, BoxAxis::Column);
        let combined = prefactor.mul(&mono);
        if combined != target {
            return Err(Error::Convention(format!("prefactor for {nu} does not collapse to the composite token")));
        }
        let sign = if a0 % 2 == 0 { 1 } else { -1 };
        let v = VertexExpr::schur(a, &nu.conjugate(), AlphabetSign::Minus);
        out = out.concat(v.times(&combined, &(rat(c * sign * sign, mu.z() as i64))));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceWindow {
    pub lambda_max: i64,
    pub x_deg: i64,
}

/// Compares the GW generating function `G_mu(lambda; 0; x)` with the image
/// of the DT side for every `mu |- d` on `lambda in [-l(mu), lambda_max]`,
/// total x-degree at most `x_deg`.
pub fn verify_correspondence(a: u32, d: u32, w: &CorrespondenceWindow) -> Result<Report> {
    let mut report = Report::new(format!("correspondence a={a} d={d}"));
    let gw = crate::gw_vertex::GwSide::new(a, d, w.lambda_max, w.x_deg)?;
    let d64 = i64::from(d);
    let work = lambda_ring(a, (-(d64 + 2), w.lambda_max + 2 * d64 + 3), w.x_deg)?;
    let cov = ChangeOfVars::new(a, &work)?;
    for mu in partitions_of(d) {
        let window = lambda_ring(a, (-(mu.len() as i64), w.lambda_max), w.x_deg)?;
        let lhs = gw.g_bullet_mu(&mu)?;
        let rhs = cov.apply(&correspondence_rhs(a, &mu)?)?;
        match lhs.first_difference(&rhs, &window) {
            Ok(None) => report.check(true, String::new),
            Ok(Some(m)) => report.fail(format!("mu={mu} {m}")),
            Err(e) => report.fail(format!("mu={mu} {e}")),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn macmahon_counts() {
        let c = enumerate_colored_3d(&Partition::empty(), 1, 5).unwrap();
        assert_eq!(specialize_counts(&c), vec![1, 1, 3, 6, 13, 24]);
        let c2 = enumerate_colored_3d(&Partition::empty(), 2, 3).unwrap();
        assert_eq!(specialize_counts(&c2), vec![1, 1, 3, 6]);
        assert!(c2.len() > 4);
        assert!(matches!(enumerate_colored_3d(&Partition::empty(), 1, 11), Err(Error::Guard(_))));
    }

    #[test]
    fn closed_form_small() {
        let r = token_ring(1, &TokenWindow::simple(5, 5)).unwrap();
        let v = reduced_vertex_closed(&p(&[1]), 1).expand(&r).unwrap();
        for k in 0..=5 {
            assert!(v.coefficient(&[int(k)]).unwrap().is_one());
        }
        let e = reduced_vertex_closed(&Partition::empty(), 2);
        let r2 = token_ring(2, &TokenWindow::simple(3, 3)).unwrap();
        assert!(e.expand(&r2).unwrap().first_difference(&Series::one(&r2), &r2).unwrap().is_none());
    }

    #[test]
    fn leg_ratios_match_closed_form() {
        for (nu, a) in [(p(&[1]), 1), (p(&[2]), 1), (p(&[1, 1]), 1), (p(&[1]), 2), (p(&[2]), 2), (p(&[1, 1]), 3)] {
            let r = leg_ratio_check(&nu, a, 5).unwrap();
            assert!(r.passed, "{nu} a={a}: {:?}", r.first_failure);
        }
    }

    #[test]
    fn other_orientation_fails_at_a2() {
        let n = 4;
        let win = token_ring(2, &volume_window(n)).unwrap();
        let nu = p(&[2]);
        let leg = counts_to_series(&enumerate_colored_3d_with(&nu, 2, 4, LegOrientation::ColumnsAlongZ).unwrap(), &win)
            .unwrap();
        let empty = counts_to_series(&enumerate_colored_3d(&Partition::empty(), 2, 4).unwrap(), &win).unwrap();
        let ratio = leg.mul(&empty.invert_graded().unwrap()).unwrap();
        let closed = expand_closed(&nu, 2, n).unwrap();
        assert!(ratio.first_difference(&closed, &win).unwrap().is_some());
    }

    #[test]
    fn uniform_specialization_recovers_one_color() {
        for nu in [p(&[1]), p(&[2]), p(&[2, 1])] {
            let one = specialize_series(&expand_closed(&nu, 1, 5).unwrap(), 1, 5).unwrap();
            for a in 2..=3 {
                let many = specialize_series(&expand_closed(&nu, a, 5).unwrap(), a, 5).unwrap();
                let lifted: Vec<Rational> = one.iter().map(|c| c.as_rational().unwrap().clone()).collect();
                let got: Vec<Rational> = many.iter().map(|c| c.as_rational().unwrap().clone()).collect();
                assert_eq!(got, lifted, "{nu} a={a}");
            }
        }
    }

    #[test]
    fn composite_splitting() {
        let m = TokenMonomial::composite(3, 1);
        assert_eq!(m.split_composite().unwrap(), (1, 0, vec![0, 0]));
        let half = TokenMonomial { r: rat(1, 2), s: vec![int(0)] };
        assert!(matches!(half.split_composite(), Err(Error::Convention(_))));
        let m6 = TokenMonomial::composite(3, 6);
        assert_eq!(m6.split_composite().unwrap(), (0, 3, vec![-2, -4]));
    }

    #[test]
    fn composite_period_is_consistent() {
        // image(P)^lcm(2,a) equals the image of the integral monomial it stands for
        for a in 1..=3u32 {
            let ring = lambda_ring(a, (-2, 6), 3).unwrap();
            let cov = ChangeOfVars::new(a, &ring).unwrap();
            let period = 2.lcm(&i64::from(a));
            let lhs = cov.composite_power(1).unwrap().pow(period).unwrap();
            let (e, n, ms) = TokenMonomial::composite(a, period).split_composite().unwrap();
            assert_eq!(e, 0);
            let mut rhs = cov.q_power(n).unwrap();
            for (l, &k) in ms.iter().enumerate() {
                rhs = rhs.mul(&cov.ql_power(l as u32 + 1, k).unwrap()).unwrap();
            }
            let win = lambda_ring(a, (-2, 4), 3).unwrap();
            assert!(lhs.first_difference(&rhs, &win).unwrap().is_none(), "a={a}");
        }
    }

    #[test]
    fn token_images() {
        let ring = lambda_ring(1, (-2, 4), 0).unwrap();
        let f = ring.field().clone();
        let cov = ChangeOfVars::new(1, &ring).unwrap();
        let q = cov.q_power(1).unwrap();
        assert_eq!(q.coeff_of(&[("lambda", int(0))]).unwrap(), CycloNum::from_int(&f, -1));
        assert_eq!(q.coeff_of(&[("lambda", int(1))]).unwrap(), -CycloNum::i_pow(&f, 1));
        assert_eq!(q.coeff_of(&[("lambda", int(2))]).unwrap(), CycloNum::from_rational(&f, rat(1, 2)));
        let ring2 = lambda_ring(2, (-2, 4), 3).unwrap();
        let q1 = ChangeOfVars::new(2, &ring2).unwrap().ql_power(1, 1).unwrap();
        assert_eq!(q1.coeff_of(&[]).unwrap(), CycloNum::from_int(ring2.field(), -1));
    }
}
