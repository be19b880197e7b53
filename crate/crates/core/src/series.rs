//! Truncated multivariate Laurent series over Q(zeta_M).
//!
//! A [`Ring`] fixes the variables, each on its own lattice `(1/D) Z` with a
//! Laurent floor and a truncation order, plus optional weighted degree caps
//! over groups of variables ("total x-degree <= 4") and the grading used by
//! `exp`/`log`.
//!
//! Every [`Series`] carries a precision vector with one entry per linear form
//! of the ring (each variable, then each cap). A coefficient at exponent `E`
//! is exact iff `f(E) <= prec[f]` for every form `f`; `None` means exact with
//! no bound (a polynomial that never lost a term). Multiplication follows
//! `prec(AB) = min(prec(A) + val(B), prec(B) + val(A))`, so Laurent products
//! lose exactly the orders their poles eat and [`Series::restrict`] refuses to
//! hand out coefficients that were never determined.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, Error, Result};
use crate::exactnum::{format_rational, int, parse_rational, rat, CycloField, CycloNum, Rational};

/// One variable: exponents lie in `(1/denom) Z` between `min/denom` and `max/denom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpec {
    name: String,
    denom: i64,
    min: i64,
    max: i64,
}

impl VarSpec {
    pub fn new(name: impl Into<String>, denom: i64, min: &Rational, max: &Rational) -> Result<VarSpec> {
        let name = name.into();
        if denom < 1 {
            return Err(usage(format!("variable {name}: denominator must be positive")));
        }
        let to_num = |r: &Rational| -> Result<i64> {
            let scaled = r * int(denom);
            if !scaled.is_integer() {
                return Err(usage(format!("variable {name}: bound {r} is off the 1/{denom} lattice")));
            }
            i64::try_from(scaled.to_integer()).map_err(|_| usage("exponent bound out of range"))
        };
        let (lo, hi) = (to_num(min)?, to_num(max)?);
        if lo > hi {
            return Err(usage(format!("variable {name}: floor {min} above truncation {max}")));
        }
        Ok(VarSpec { name, denom, min: lo, max: hi })
    }

    /// Integer-lattice variable with exponents in `[min, max]`.
    pub fn integer(name: impl Into<String>, min: i64, max: i64) -> VarSpec {
        assert!(min <= max);
        VarSpec { name: name.into(), denom: 1, min, max }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn min_exponent(&self) -> Rational {
        rat(self.min, self.denom)
    }

    pub fn max_exponent(&self) -> Rational {
        rat(self.max, self.denom)
    }
}

/// Weighted cap `sum w_v * num(e_v) <= max`, weights acting on lattice numerators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCap {
    weights: Vec<(usize, i64)>,
    max: i64,
}

/// Variables, caps and grading shared by a family of series.
#[derive(Debug)]
pub struct Ring {
    field: Arc<CycloField>,
    vars: Vec<VarSpec>,
    caps: Vec<DegreeCap>,
    grading: Vec<i64>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        self.field.order() == other.field.order()
            && self.vars == other.vars
            && self.caps == other.caps
            && self.grading == other.grading
    }
}

pub struct RingBuilder {
    field: Arc<CycloField>,
    vars: Vec<VarSpec>,
    caps: Vec<(Vec<(String, i64)>, i64)>,
    grading: Vec<(String, i64)>,
}

impl RingBuilder {
    pub fn var(mut self, v: VarSpec) -> Self {
        self.vars.push(v);
        self
    }

    /// Caps the weighted degree of the named variables.
    pub fn cap(mut self, weights: &[(&str, i64)], max: i64) -> Self {
        self.caps.push((weights.iter().map(|(n, w)| (n.to_string(), *w)).collect(), max));
        self
    }

    /// Gives `name` weight `w` in the exp/log grading.
    pub fn grade(mut self, name: &str, w: i64) -> Self {
        self.grading.push((name.to_string(), w));
        self
    }

    pub fn build(self) -> Result<Arc<Ring>> {
        let index = |n: &str| -> Result<usize> {
            self.vars.iter().position(|v| v.name == n).ok_or_else(|| usage(format!("unknown variable {n}")))
        };
        for (i, v) in self.vars.iter().enumerate() {
            if self.vars[..i].iter().any(|u| u.name == v.name) {
                return Err(usage(format!("duplicate variable {}", v.name)));
            }
        }
        let mut caps = Vec::new();
        for (ws, max) in &self.caps {
            let mut weights = Vec::new();
            for (n, w) in ws {
                let i = index(n)?;
                if *w <= 0 {
                    return Err(usage(format!("cap weight of {n} must be positive")));
                }
                weights.push((i, *w));
            }
            caps.push(DegreeCap { weights, max: *max });
        }
        let mut grading = vec![0; self.vars.len()];
        for (n, w) in &self.grading {
            if *w <= 0 {
                return Err(usage("grading weights must be positive"));
            }
            grading[index(n)?] = *w;
        }
        Ok(Arc::new(Ring { field: self.field, vars: self.vars, caps, grading }))
    }
}

impl Ring {
    pub fn builder(field: &Arc<CycloField>) -> RingBuilder {
        RingBuilder { field: field.clone(), vars: Vec::new(), caps: Vec::new(), grading: Vec::new() }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.var_index(name).ok_or_else(|| usage(format!("ring has no variable {name}")))
    }

    fn nforms(&self) -> usize {
        self.vars.len() + self.caps.len()
    }

    fn form_value(&self, f: usize, e: &[i64]) -> i64 {
        if f < self.vars.len() {
            e[f]
        } else {
            self.caps[f - self.vars.len()].weights.iter().map(|&(i, w)| w * e[i]).sum()
        }
    }

    fn form_max(&self, f: usize) -> i64 {
        if f < self.vars.len() {
            self.vars[f].max
        } else {
            self.caps[f - self.vars.len()].max
        }
    }

    fn form_name(&self, f: usize) -> String {
        if f < self.vars.len() {
            self.vars[f].name.clone()
        } else {
            let names: Vec<_> =
                self.caps[f - self.vars.len()].weights.iter().map(|&(i, _)| self.vars[i].name.as_str()).collect();
            format!("cap({})", names.join(","))
        }
    }

    /// Grading of an exponent vector, scaled by the lcm of the denominators.
    fn grade(&self, e: &[i64]) -> Rational {
        let mut g = Rational::zero();
        for (i, &w) in self.grading.iter().enumerate() {
            if w != 0 && e[i] != 0 {
                g += rat(w * e[i], self.vars[i].denom);
            }
        }
        g
    }

    fn has_grading(&self) -> bool {
        self.grading.iter().any(|&w| w != 0)
    }

    fn total_degree(&self, e: &[i64]) -> Rational {
        e.iter().zip(&self.vars).map(|(&x, v)| rat(x, v.denom)).sum()
    }

    /// Converts rational exponents to lattice numerators.
    pub fn lattice_point(&self, exps: &[Rational]) -> Result<Vec<i64>> {
        if exps.len() != self.vars.len() {
            return Err(usage("exponent vector has wrong length"));
        }
        exps.iter()
            .zip(&self.vars)
            .map(|(r, v)| {
                let s = r * int(v.denom);
                if !s.is_integer() {
                    return Err(usage(format!("exponent {r} is off the lattice of {}", v.name)));
                }
                i64::try_from(s.to_integer()).map_err(|_| usage("exponent out of range"))
            })
            .collect()
    }

    pub fn exponents(&self, e: &[i64]) -> Vec<Rational> {
        e.iter().zip(&self.vars).map(|(&x, v)| rat(x, v.denom)).collect()
    }

    fn compatible(self: &Arc<Ring>, other: &Arc<Ring>) -> Result<()> {
        if Arc::ptr_eq(self, other) || **self == **other {
            Ok(())
        } else {
            Err(usage("series live in incompatible rings"))
        }
    }
}

type Exp = Vec<i64>;

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

/// A truncated series in the variables of a [`Ring`].
#[derive(Clone)]
pub struct Series {
    ring: Arc<Ring>,
    terms: BTreeMap<Exp, CycloNum>,
    prec: Vec<Option<i64>>,
}

impl Series {
    pub fn zero(ring: &Arc<Ring>) -> Series {
        Series { ring: ring.clone(), terms: BTreeMap::new(), prec: vec![None; ring.nforms()] }
    }

    pub fn one(ring: &Arc<Ring>) -> Series {
        Series::constant(ring, CycloNum::one(&ring.field))
    }

    pub fn constant(ring: &Arc<Ring>, c: CycloNum) -> Series {
        let mut s = Series::zero(ring);
        s.push(vec![0; ring.vars.len()], c).expect("the constant term lies in every window");
        s
    }

    pub fn from_rational(ring: &Arc<Ring>, r: Rational) -> Series {
        Series::constant(ring, CycloNum::from_rational(&ring.field, r))
    }

    /// `coeff * prod v^(e_v)` with exponents given as lattice numerators.
    pub fn monomial_raw(ring: &Arc<Ring>, e: Vec<i64>, coeff: CycloNum) -> Result<Series> {
        if e.len() != ring.vars.len() {
            return Err(usage("exponent vector has wrong length"));
        }
        let mut s = Series::zero(ring);
        s.push(e, coeff)?;
        Ok(s)
    }

    /// `coeff * prod v^(e_v)` with rational exponents.
    pub fn monomial(ring: &Arc<Ring>, exps: &[Rational], coeff: CycloNum) -> Result<Series> {
        let e = ring.lattice_point(exps)?;
        Series::monomial_raw(ring, e, coeff)
    }

    /// `coeff * name^exp`.
    pub fn var_power(ring: &Arc<Ring>, name: &str, exp: &Rational, coeff: CycloNum) -> Result<Series> {
        let mut exps = vec![Rational::zero(); ring.vars.len()];
        exps[ring.index_of(name)?] = exp.clone();
        Series::monomial(ring, &exps, coeff)
    }

    pub fn var(ring: &Arc<Ring>, name: &str) -> Result<Series> {
        Series::var_power(ring, name, &Rational::one(), CycloNum::one(&ring.field))
    }

    /// `sum_n coeff(n) * name^n` over integers `n` from `0` to the truncation order,
    /// for a power series in one integer-lattice variable known in full.
    pub fn univariate<F>(ring: &Arc<Ring>, name: &str, mut coeff: F) -> Result<Series>
    where
        F: FnMut(i64) -> CycloNum,
    {
        let i = ring.index_of(name)?;
        let v = &ring.vars[i];
        if v.denom != 1 {
            return Err(usage(format!("{name} is not an integer-lattice variable")));
        }
        let mut s = Series::zero(ring);
        for n in v.min.max(0)..=v.max {
            let c = coeff(n);
            let mut e = vec![0; ring.vars.len()];
            e[i] = n;
            s.push(e, c)?;
        }
        // everything above the truncation order was dropped
        s.prec[i] = Some(v.max);
        s.clamp_caps_for_var(i);
        Ok(s)
    }

    /// `exp(c * name)` for an integer-lattice variable.
    pub fn exp_linear(ring: &Arc<Ring>, name: &str, c: &CycloNum) -> Result<Series> {
        let mut power = CycloNum::one(&ring.field);
        let mut fact = BigInt::one();
        Series::univariate(ring, name, |n| {
            if n > 0 {
                power = &power * c;
                fact *= BigInt::from(n);
            }
            power.scale(&Rational::new(BigInt::one(), fact.clone()))
        })
    }

    /// `sin(c * name)` for rational `c`.
    pub fn sin_linear(ring: &Arc<Ring>, name: &str, c: &Rational) -> Result<Series> {
        let field = ring.field.clone();
        let mut fact = BigInt::one();
        let mut cp = Rational::one();
        Series::univariate(ring, name, |n| {
            if n > 0 {
                fact *= BigInt::from(n);
                cp *= c;
            }
            if n % 2 == 0 {
                return CycloNum::zero(&field);
            }
            let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
            CycloNum::from_rational(&field, &cp * Rational::new(BigInt::from(sign), fact.clone()))
        })
    }

    fn clamp_caps_for_var(&mut self, i: usize) {
        let nv = self.ring.vars.len();
        for (k, cap) in self.ring.caps.iter().enumerate() {
            if cap.weights.iter().any(|&(j, _)| j == i) {
                self.prec[nv + k] = min_opt(self.prec[nv + k], Some(cap.max));
            }
        }
    }

    /// Adds `c * x^e` respecting the window: below a floor is an error,
    /// beyond a truncation order the term is dropped and precision recorded.
    fn push(&mut self, e: Exp, c: CycloNum) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if !self.admit(&e)? {
            return Ok(());
        }
        add_into(&mut self.terms, e, &c);
        Ok(())
    }

    /// Window check; returns false (and lowers precision) for dropped terms.
    fn admit(&mut self, e: &[i64]) -> Result<bool> {
        let ring = &self.ring;
        let mut keep = true;
        for f in 0..ring.nforms() {
            let m = ring.form_max(f);
            if ring.form_value(f, e) > m {
                self.prec[f] = min_opt(self.prec[f], Some(m));
                keep = false;
            }
        }
        if !keep {
            return Ok(false);
        }
        for (x, v) in e.iter().zip(&ring.vars) {
            if *x < v.min {
                return Err(Error::Precision(format!(
                    "exponent {} of {} falls below the Laurent floor {}",
                    rat(*x, v.denom),
                    v.name,
                    v.min_exponent()
                )));
            }
        }
        Ok(true)
    }

    /// Declares the stored terms complete up to every degree cap of the ring.
    pub fn with_cap_precision(mut self) -> Series {
        let nv = self.ring.vars.len();
        for (k, cap) in self.ring.caps.iter().enumerate() {
            self.prec[nv + k] = min_opt(self.prec[nv + k], Some(cap.max));
        }
        self
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.ring.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as (lattice numerators, coefficient), in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &CycloNum)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// Precision bound of a variable, as a rational exponent (`None` = exact).
    pub fn precision(&self, name: &str) -> Option<Rational> {
        let i = self.ring.var_index(name)?;
        self.prec[i].map(|p| rat(p, self.ring.vars[i].denom))
    }

    /// Lowest exponent of the named variable among stored terms.
    pub fn valuation(&self, name: &str) -> Option<Rational> {
        let i = self.ring.var_index(name)?;
        self.form_valuation(i).map(|v| rat(v, self.ring.vars[i].denom))
    }

    fn form_valuation(&self, f: usize) -> Option<i64> {
        self.terms.keys().map(|e| self.ring.form_value(f, e)).min()
    }

    /// Exact coefficient of the monomial with the given rational exponents.
    pub fn coefficient(&self, exps: &[Rational]) -> Result<CycloNum> {
        let e = self.ring.lattice_point(exps)?;
        for f in 0..self.ring.nforms() {
            if let Some(p) = self.prec[f] {
                if self.ring.form_value(f, &e) > p {
                    return Err(Error::Precision(format!(
                        "coefficient requested beyond the precision of {}",
                        self.ring.form_name(f)
                    )));
                }
            }
        }
        Ok(self.terms.get(&e).cloned().unwrap_or_else(|| CycloNum::zero(&self.ring.field)))
    }

    /// Coefficient by variable name; unnamed variables get exponent 0.
    pub fn coeff_of(&self, exps: &[(&str, Rational)]) -> Result<CycloNum> {
        let mut v = vec![Rational::zero(); self.ring.vars.len()];
        for (n, r) in exps {
            v[self.ring.index_of(n)?] = r.clone();
        }
        self.coefficient(&v)
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.ring.compatible(&other.ring)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            add_into(&mut out.terms, e.clone(), c);
        }
        for (p, q) in out.prec.iter_mut().zip(&other.prec) {
            *p = min_opt(*p, *q);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &CycloNum) -> Series {
        if c.is_zero() {
            let mut z = Series::zero(&self.ring);
            z.prec = self.prec.clone();
            return z;
        }
        self.map_coeffs(|x| x * c)
    }

    pub fn scale_rational(&self, r: &Rational) -> Series {
        self.scale(&CycloNum::from_rational(&self.ring.field, r.clone()))
    }

    fn map_coeffs<F: Fn(&CycloNum) -> CycloNum>(&self, f: F) -> Series {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let y = f(c);
            if !y.is_zero() {
                terms.insert(e.clone(), y);
            }
        }
        Series { ring: self.ring.clone(), terms, prec: self.prec.clone() }
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.ring.compatible(&other.ring)?;
        let ring = &self.ring;
        let mut out = Series::zero(ring);
        for f in 0..ring.nforms() {
            let va = self.form_valuation(f);
            let vb = other.form_valuation(f);
            let left = match (self.prec[f], vb) {
                (Some(p), Some(v)) => Some(p + v),
                _ => None,
            };
            let right = match (other.prec[f], va) {
                (Some(p), Some(v)) => Some(p + v),
                _ => None,
            };
            // a zero factor with finite precision still bounds the product
            let left = if vb.is_none() && self.prec[f].is_some() && other.prec[f].is_some() {
                min_opt(self.prec[f], other.prec[f])
            } else {
                left
            };
            out.prec[f] = min_opt(left, right);
        }
        let n = ring.vars.len();
        let mut acc: HashMap<Exp, CycloNum> = HashMap::new();
        let mut e = vec![0i64; n];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                for k in 0..n {
                    e[k] = ea[k] + eb[k];
                }
                if !out.admit(&e)? {
                    continue;
                }
                let p = ca * cb;
                match acc.get_mut(&e) {
                    Some(slot) => *slot += &p,
                    None => {
                        acc.insert(e.clone(), p);
                    }
                }
            }
        }
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(out)
    }

    pub fn pow(&self, n: i64) -> Result<Series> {
        let mut base = if n < 0 { self.invert()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Series::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiplicative inverse.
    ///
    /// The lowest total-degree part must be a single monomial `m`; then
    /// `s = m (c + n)` with every term of `n` of positive total degree and
    /// `1/s = m^-1 c^-1 sum_k (-n/c)^k`.
    pub fn invert(&self) -> Result<Series> {
        self.invert_by(Ring::total_degree)
    }

    /// Inverse with "lowest order" measured by the ring grading instead of
    /// total degree.
    pub fn invert_graded(&self) -> Result<Series> {
        if !self.ring.has_grading() {
            return Err(usage("graded inverse needs a ring with a grading"));
        }
        self.invert_by(Ring::grade)
    }

    fn invert_by(&self, degree: fn(&Ring, &[i64]) -> Rational) -> Result<Series> {
        let ring = &self.ring;
        if self.terms.is_empty() {
            return Err(domain("inverse of the zero series"));
        }
        let mut lowest: Option<(Rational, Vec<&Exp>)> = None;
        for e in self.terms.keys() {
            let d = degree(ring, e);
            match &mut lowest {
                Some((best, list)) if d == *best => list.push(e),
                Some((best, _)) if d > *best => {}
                _ => lowest = Some((d, vec![e])),
            }
        }
        let (_, lead) = lowest.unwrap();
        if lead.len() != 1 {
            return Err(domain("leading part is not a single monomial; series is not invertible"));
        }
        let m = lead[0].clone();
        let c = self.terms[&m].clone();
        let neg_m: Exp = m.iter().map(|x| -x).collect();
        let m_inv = Series::monomial_raw(ring, neg_m, CycloNum::one(&ring.field))
            .map_err(|_| domain("inverse leading monomial leaves the ring window"))?;
        if m_inv.is_zero() {
            return Err(domain("inverse leading monomial leaves the ring window"));
        }
        let unit = self.mul(&m_inv)?;
        let c_inv = c.inv()?;
        // n = (unit - c) / c, negated
        let mut step = unit.clone();
        step.terms.remove(&vec![0; ring.vars.len()]);
        let step = step.scale(&(-&c_inv));
        let mut acc = Series::constant(ring, CycloNum::one(&ring.field));
        acc.prec = step.prec.clone();
        let mut power = Series::one(ring);
        let guard = self.iteration_guard(&step, degree)?;
        for _ in 0..guard {
            power = power.mul(&step)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        for (p, q) in acc.prec.iter_mut().zip(&power.prec) {
            *p = min_opt(*p, *q);
        }
        acc.scale(&c_inv).mul(&m_inv)
    }

    /// Upper bound on the number of products before a positively graded
    /// series' powers leave the window.
    fn iteration_guard(&self, s: &Series, degree: fn(&Ring, &[i64]) -> Rational) -> Result<usize> {
        let ring = &self.ring;
        let mut min_deg: Option<Rational> = None;
        for e in s.terms.keys() {
            let d = degree(ring, e);
            if !d.is_positive() {
                return Err(domain("series has a term of nonpositive degree"));
            }
            min_deg = Some(match min_deg {
                Some(m) if m <= d => m,
                _ => d,
            });
        }
        let Some(min_deg) = min_deg else { return Ok(1) };
        let top: Vec<i64> = ring.vars.iter().map(|v| v.max).collect();
        let bottom: Vec<i64> = ring.vars.iter().map(|v| v.min).collect();
        let span = degree(ring, &top) - degree(ring, &bottom);
        let n = (span / min_deg).ceil().to_integer();
        Ok(usize::try_from(n).unwrap_or(0) + 2)
    }

    /// `exp(s)`; every term of `s` must have positive degree in the ring's grading.
    pub fn exp(&self) -> Result<Series> {
        let ring = &self.ring;
        if !ring.has_grading() {
            return Err(usage("exp needs a ring with a grading"));
        }
        let guard = self.iteration_guard(self, Ring::grade)?;
        let mut acc = Series::one(ring);
        let mut term = Series::one(ring);
        for k in 1..=guard as i64 {
            term = term.mul(self)?.scale_rational(&rat(1, k));
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term)?;
        }
        for (p, q) in acc.prec.iter_mut().zip(&term.prec) {
            *p = min_opt(*p, *q);
        }
        for (p, q) in acc.prec.iter_mut().zip(&self.prec) {
            *p = min_opt(*p, *q);
        }
        Ok(acc)
    }

    /// `log(f)`; the grading-zero part of `f` must be exactly 1.
    pub fn log(&self) -> Result<Series> {
        let ring = &self.ring;
        if !ring.has_grading() {
            return Err(usage("log needs a ring with a grading"));
        }
        let zero = vec![0; ring.vars.len()];
        let mut s = self.clone();
        match s.terms.remove(&zero) {
            Some(c) if c.is_one() => {}
            _ => return Err(domain("log needs constant term 1")),
        }
        let guard = self.iteration_guard(&s, Ring::grade)?;
        let mut acc = Series::zero(ring);
        acc.prec = s.prec.clone();
        let mut power = Series::one(ring);
        for k in 1..=guard as i64 {
            power = power.mul(&s)?;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale_rational(&rat(sign, k)))?;
        }
        for (p, q) in acc.prec.iter_mut().zip(&power.prec) {
            *p = min_opt(*p, *q);
        }
        Ok(acc)
    }

    /// Ring homomorphism into `target`.
    ///
    /// `bindings` gives, per source variable name, the image of its lattice
    /// generator `v^(1/D)`. Unbound variables map to the same-named target
    /// variable.
    pub fn substitute(&self, bindings: &[(&str, Series)], target: &Arc<Ring>) -> Result<Series> {
        let src = &self.ring;
        let mut gens: Vec<Series> = Vec::with_capacity(src.vars.len());
        for v in &src.vars {
            let bound = bindings.iter().find(|(n, _)| *n == v.name);
            let g = match bound {
                Some((_, s)) => {
                    target.compatible(&s.ring)?;
                    s.clone()
                }
                None => {
                    if target.var_index(&v.name).is_none() {
                        // allowed only if the variable never occurs
                        if self.terms.keys().any(|e| e[src.index_of(&v.name).unwrap()] != 0) {
                            return Err(usage(format!("no image given for {}", v.name)));
                        }
                        Series::one(target)
                    } else {
                        Series::var_power(target, &v.name, &rat(1, v.denom), CycloNum::one(&target.field))?
                    }
                }
            };
            gens.push(g);
        }
        for (n, _) in bindings {
            src.index_of(n)?;
        }
        let mut cache: HashMap<(usize, i64), Series> = HashMap::new();
        let mut inverses: HashMap<usize, Series> = HashMap::new();
        let mut out = Series::zero(target);
        for (e, c) in &self.terms {
            let mut img = Series::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = cache.entry((i, k)) {
                    let base = if k < 0 {
                        if let std::collections::hash_map::Entry::Vacant(e) = inverses.entry(i) {
                            e.insert(gens[i].invert()?);
                        }
                        inverses[&i].clone()
                    } else {
                        gens[i].clone()
                    };
                    e.insert(base.pow(k.abs())?);
                }
                img = img.mul(&cache[&(i, k)])?;
            }
            out = out.add(&img)?;
        }
        self.bound_substitution_precision(&mut out, &gens)?;
        Ok(out)
    }

    /// Lowers the precision of a substitution result by what the source never knew.
    fn bound_substitution_precision(&self, out: &mut Series, gens: &[Series]) -> Result<()> {
        let src = &self.ring;
        let tgt = out.ring.clone();
        let nv = src.vars.len();
        for f in 0..src.nforms() {
            let Some(p) = self.prec[f] else { continue };
            if f >= nv {
                // cap: carry over when the capped variables map monomially onto
                // a target cap with the same names and weights
                let cap = &src.caps[f - nv];
                // every unknown term has a positive exponent in some capped variable
                if p >= 0 && cap.weights.iter().all(|&(i, w)| w > 0 && src.vars[i].min >= 0 && gens[i].is_zero()) {
                    continue;
                }
                let names: Vec<(&str, i64)> =
                    cap.weights.iter().map(|&(i, w)| (src.vars[i].name.as_str(), w)).collect();
                let hit = tgt.caps.iter().position(|tc| {
                    tc.weights.len() == names.len()
                        && tc.weights.iter().all(|&(j, w)| names.contains(&(tgt.vars[j].name.as_str(), w)))
                });
                let monomial_images = cap.weights.iter().all(|&(i, _)| {
                    gens[i].terms.len() == 1
                        && tgt
                            .var_index(&src.vars[i].name)
                            .is_some_and(|j| gens[i].terms.keys().next().unwrap()[j] == 1 && tgt.vars[j].denom == 1)
                });
                match hit {
                    Some(k) if monomial_images => {
                        let slot = &mut out.prec[tgt.vars.len() + k];
                        *slot = min_opt(*slot, Some(p));
                    }
                    _ => {
                        return Err(Error::Precision(format!(
                            "truncated {} cannot be carried through the substitution",
                            src.form_name(f)
                        )))
                    }
                }
                continue;
            }
            // variable v known only up to p: unknown terms have e_v >= p + 1
            let v = f;
            if p >= 0 && gens[v].is_zero() {
                continue;
            }
            let vals: Vec<Vec<Option<i64>>> =
                gens.iter().map(|g| (0..tgt.vars.len()).map(|t| g.form_valuation(t)).collect()).collect();
            let mut candidates: Vec<usize> = (0..tgt.vars.len()).collect();
            if let Some(same) = tgt.var_index(&src.vars[v].name) {
                candidates.retain(|&t| t != same);
                candidates.insert(0, same);
            }
            let mut done = false;
            for t in candidates {
                let Some(gv) = vals[v][t] else { continue };
                if gv <= 0 {
                    continue;
                }
                let mut bound = (p + 1) * gv;
                let mut ok = true;
                for (u, uv) in src.vars.iter().enumerate() {
                    if u == v {
                        continue;
                    }
                    match vals[u][t] {
                        Some(gu) => bound += (uv.min * gu).min(uv.max * gu),
                        None => {
                            if !gens[u].is_zero() && (uv.min != 0 || uv.max != 0) {
                                ok = false;
                            }
                        }
                    }
                }
                if ok {
                    out.prec[t] = min_opt(out.prec[t], Some(bound - 1));
                    done = true;
                    break;
                }
            }
            if !done {
                return Err(Error::Precision(format!(
                    "{} is truncated but its image has no positive valuation; the substitution is undetermined",
                    src.vars[v].name
                )));
            }
        }
        Ok(())
    }

    /// Moves the series into `target`, renaming each variable through `rename`
    /// and embedding coefficients into the target field. Capped variables
    /// must keep their lattice; caps carry over when the renamed names and
    /// weights match a target cap.
    pub fn relabel<F: Fn(&str) -> String>(&self, target: &Arc<Ring>, rename: F) -> Result<Series> {
        let src = &self.ring;
        let map: Vec<usize> = src.vars.iter().map(|v| target.index_of(&rename(&v.name))).collect::<Result<_>>()?;
        let mut out = Series::zero(target);
        let tnv = target.vars.len();
        for (i, &j) in map.iter().enumerate() {
            if let Some(p) = self.prec[i] {
                let (ds, dt) = (src.vars[i].denom, target.vars[j].denom);
                // unknown terms start at (p + 1) / ds
                let first = Integer::div_ceil(&((p + 1) * dt), &ds);
                out.prec[j] = min_opt(out.prec[j], Some(first - 1));
            }
        }
        for (k, cap) in src.caps.iter().enumerate() {
            let Some(p) = self.prec[src.vars.len() + k] else { continue };
            let want: Vec<(usize, i64)> = cap.weights.iter().map(|&(i, w)| (map[i], w)).collect();
            let same_lattice = cap.weights.iter().all(|&(i, _)| src.vars[i].denom == target.vars[map[i]].denom);
            let hit = target
                .caps
                .iter()
                .position(|tc| tc.weights.len() == want.len() && want.iter().all(|x| tc.weights.contains(x)));
            match hit {
                Some(t) if same_lattice => out.prec[tnv + t] = min_opt(out.prec[tnv + t], Some(p)),
                _ => {
                    return Err(Error::Precision(format!(
                        "truncated {} has no counterpart in the target ring",
                        src.form_name(src.vars.len() + k)
                    )))
                }
            }
        }
        for (e, c) in &self.terms {
            let mut te = vec![0; tnv];
            for (i, &x) in e.iter().enumerate() {
                let r = rat(x, src.vars[i].denom) * int(target.vars[map[i]].denom);
                if !r.is_integer() {
                    return Err(usage(format!("exponent of {} is off the target lattice", src.vars[i].name)));
                }
                te[map[i]] += i64::try_from(r.to_integer()).map_err(|_| usage("exponent out of range"))?;
            }
            out.push(te, c.embed(&target.field)?)?;
        }
        Ok(out)
    }

    /// Re-expresses the series in `target`, keeping terms inside its window.
    /// Fails if the target window reaches beyond the known precision.
    pub fn restrict(&self, target: &Arc<Ring>) -> Result<Series> {
        self.extract(&[], target)
    }

    /// Coefficient series of the given fixed exponents, as a series in `target`
    /// (which omits the fixed variables).
    pub fn extract(&self, fixed: &[(&str, Rational)], target: &Arc<Ring>) -> Result<Series> {
        let src = &self.ring;
        if src.field.order() != target.field.order() {
            return Err(usage("target ring has a different coefficient field"));
        }
        let mut fixed_num: Vec<Option<i64>> = vec![None; src.vars.len()];
        for (n, r) in fixed {
            let i = src.index_of(n)?;
            let s = r * int(src.vars[i].denom);
            if !s.is_integer() {
                return Err(usage(format!("fixed exponent {r} of {n} is off the lattice")));
            }
            fixed_num[i] = Some(i64::try_from(s.to_integer()).map_err(|_| usage("exponent out of range"))?);
        }
        // source variable -> (target index, numerator scale)
        let mut map: Vec<Option<(usize, i64)>> = Vec::with_capacity(src.vars.len());
        for (i, v) in src.vars.iter().enumerate() {
            match target.var_index(&v.name) {
                Some(_) if fixed_num[i].is_some() => {
                    return Err(usage(format!("fixed variable {} also appears in the target", v.name)))
                }
                Some(j) => {
                    let tv = &target.vars[j];
                    if tv.denom % v.denom != 0 {
                        return Err(usage(format!("target lattice of {} is coarser than the source", v.name)));
                    }
                    map.push(Some((j, tv.denom / v.denom)));
                }
                None => map.push(None),
            }
        }
        // precision check over the box the target window spans
        let mut top = vec![0i64; src.vars.len()];
        for (i, v) in src.vars.iter().enumerate() {
            top[i] = match (fixed_num[i], map[i]) {
                (Some(x), _) => x,
                (None, Some((j, scale))) => Integer::div_floor(&target.vars[j].max, &scale).min(v.max),
                (None, None) => 0,
            };
        }
        let nv = src.vars.len();
        for f in 0..src.nforms() {
            let Some(p) = self.prec[f] else { continue };
            let reach = if f < nv {
                top[f]
            } else {
                let cap = &src.caps[f - nv];
                let fixed_part: i64 =
                    cap.weights.iter().filter(|(i, _)| fixed_num[*i].is_some()).map(|&(i, w)| w * top[i]).sum();
                let free: Vec<(usize, i64)> =
                    cap.weights.iter().filter(|(i, _)| fixed_num[*i].is_none()).copied().collect();
                let naive: i64 = free.iter().map(|&(i, w)| w * top[i]).sum();
                let capped = target
                    .caps
                    .iter()
                    .filter(|tc| {
                        tc.weights.len() == free.len()
                            && free
                                .iter()
                                .all(|&(i, w)| map[i].is_some_and(|(j, s)| s == 1 && tc.weights.contains(&(j, w))))
                    })
                    .map(|tc| tc.max)
                    .min();
                fixed_part + capped.map_or(naive, |c| c.min(naive))
            };
            if reach > p {
                return Err(Error::Precision(format!(
                    "requested window reaches {} = {} but the series is exact only up to {}",
                    src.form_name(f),
                    reach,
                    p
                )));
            }
        }
        let mut out = Series::zero(target);
        for (e, c) in &self.terms {
            if (0..src.vars.len()).any(|i| fixed_num[i].is_some_and(|x| x != e[i])) {
                continue;
            }
            let mut te = vec![0i64; target.vars.len()];
            let mut skip = false;
            for (i, &x) in e.iter().enumerate() {
                if fixed_num[i].is_some() {
                    continue;
                }
                match map[i] {
                    Some((j, scale)) => te[j] = x * scale,
                    None if x != 0 => {
                        skip = true;
                    }
                    None => {}
                }
            }
            if skip {
                return Err(usage("term uses a variable the target ring lacks"));
            }
            out.push(te, c.clone())?;
        }
        // exact beyond the window only if the source was
        for f in 0..target.nforms() {
            if out.prec[f].is_none() && self.prec.iter().any(|p| p.is_some()) {
                out.prec[f] = Some(target.form_max(f));
            }
        }
        Ok(out)
    }

    /// First coefficient where the two series differ on `window`, after
    /// restricting both to it.
    pub fn first_difference(&self, other: &Series, window: &Arc<Ring>) -> Result<Option<Mismatch>> {
        let a = self.restrict(window)?;
        let b = other.restrict(window)?;
        let keys: std::collections::BTreeSet<&Exp> = a.terms.keys().chain(b.terms.keys()).collect();
        let zero = CycloNum::zero(&window.field);
        for e in keys {
            let x = a.terms.get(e).unwrap_or(&zero);
            let y = b.terms.get(e).unwrap_or(&zero);
            if x != y {
                return Ok(Some(Mismatch { exponents: window.exponents(e), left: x.clone(), right: y.clone() }));
            }
        }
        Ok(None)
    }

    /// Terms with every exponent an integer.
    pub fn all_exponents_integral(&self) -> bool {
        self.terms.keys().all(|e| e.iter().zip(&self.ring.vars).all(|(x, v)| x % v.denom == 0))
    }

    pub fn to_json(&self) -> SeriesJson {
        let ring = &self.ring;
        SeriesJson {
            field_order: ring.field.order(),
            vars: ring
                .vars
                .iter()
                .map(|v| VarJson {
                    name: v.name.clone(),
                    denom: v.denom,
                    min: format_rational(&v.min_exponent()),
                    max: format_rational(&v.max_exponent()),
                })
                .collect(),
            caps: ring
                .caps
                .iter()
                .map(|c| CapJson {
                    vars: c.weights.iter().map(|&(i, _)| ring.vars[i].name.clone()).collect(),
                    weights: c.weights.iter().map(|&(_, w)| w).collect(),
                    max: c.max,
                })
                .collect(),
            precision: ring
                .vars
                .iter()
                .zip(&self.prec)
                .map(|(v, p)| p.map(|p| format_rational(&rat(p, v.denom))))
                .collect(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exponents: ring.exponents(e).iter().map(format_rational).collect(),
                    coeff: c.coeffs().iter().map(format_rational).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Series> {
        let field = CycloField::new(j.field_order);
        let mut b = Ring::builder(&field);
        for v in &j.vars {
            b = b.var(VarSpec::new(&v.name, v.denom, &parse_rational(&v.min)?, &parse_rational(&v.max)?)?);
        }
        for c in &j.caps {
            let w: Vec<(&str, i64)> = c.vars.iter().map(|s| s.as_str()).zip(c.weights.iter().copied()).collect();
            b = b.cap(&w, c.max);
        }
        let ring = b.build()?;
        let mut s = Series::zero(&ring);
        for t in &j.terms {
            let exps: Vec<Rational> = t.exponents.iter().map(|x| parse_rational(x)).collect::<Result<_>>()?;
            let e = ring.lattice_point(&exps)?;
            let coeffs: Vec<Rational> = t.coeff.iter().map(|x| parse_rational(x)).collect::<Result<_>>()?;
            if coeffs.len() != field.degree() {
                return Err(usage("coefficient vector length does not match the field degree"));
            }
            s.push(e, CycloNum::from_coeffs(&field, coeffs))?;
        }
        for (i, p) in j.precision.iter().enumerate() {
            if let Some(p) = p {
                let r = parse_rational(p)? * int(ring.vars[i].denom);
                s.prec[i] = Some(i64::try_from(r.to_integer()).map_err(|_| usage("precision out of range"))?);
                s.clamp_caps_for_var(i);
            }
        }
        Ok(s)
    }
}

fn add_into(terms: &mut BTreeMap<Exp, CycloNum>, e: Exp, c: &CycloNum) {
    use std::collections::btree_map::Entry;
    match terms.entry(e) {
        Entry::Vacant(v) => {
            v.insert(c.clone());
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// A coefficient where two series disagree.
#[derive(Clone, Debug)]
pub struct Mismatch {
    pub exponents: Vec<Rational>,
    pub left: CycloNum,
    pub right: CycloNum,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exponents.iter().map(|r| r.to_string()).collect();
        write!(f, "at exponents ({}): {} != {}", e.join(", "), self.left, self.right)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (x, v) in e.iter().zip(&self.ring.vars) {
                if *x != 0 {
                    write!(f, "*{}^{}", v.name, rat(*x, v.denom))?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{}]", self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarJson {
    pub name: String,
    pub denom: i64,
    pub min: String,
    pub max: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapJson {
    pub vars: Vec<String>,
    pub weights: Vec<i64>,
    pub max: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<String>,
    pub coeff: Vec<String>,
}

/// Canonical JSON form of a series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub field_order: u32,
    pub vars: Vec<VarJson>,
    #[serde(default)]
    pub caps: Vec<CapJson>,
    #[serde(default)]
    pub precision: Vec<Option<String>>,
    pub terms: Vec<TermJson>,
}
