//! Relative local invariants of orbi-curves: the genus-zero cap with one
//! stack point, partition-indexed blocks, and the gluing law.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dt_vertex::{lambda_ring, x_name};
use crate::error::{usage, Result};
use crate::exactnum::{field_for, format_rational, int, rat, CycloField, CycloNum, Rational};
use crate::gw_vertex::r_bullet_zero;
use crate::hurwitz::phi;
use crate::partitions::{partitions_of, Partition};
use crate::report::Report;
use crate::series::{Ring, Series, SeriesJson, VarSpec};

/// Variable `x_i` attached to stack point `point`.
pub fn point_var(i: u32, point: usize) -> String {
    format!("x{i}_{point}")
}

/// A family of series `Z_d(lambda; x)_{alpha, a}` indexed by one partition of
/// `d` per boundary slot.
#[derive(Clone, Debug)]
pub struct LocalBlock {
    d: u32,
    a_list: Vec<u32>,
    slots: usize,
    x_deg: i64,
    ring: Arc<Ring>,
    entries: BTreeMap<Vec<Partition>, Series>,
}

/// `lambda` on the `1/lcm(a)` lattice plus `x_{i,p}` for each stack point, one
/// total-degree cap per point.
fn block_ring(a_list: &[u32], lambda: (&Rational, &Rational), x_deg: i64) -> Result<Arc<Ring>> {
    let den = a_list.iter().fold(1u32, |l, &a| l.lcm(&a));
    let order = a_list.iter().fold(4u32, |l, &a| l.lcm(&field_for(a)));
    let field = CycloField::new(order);
    let mut b = Ring::builder(&field).var(VarSpec::new("lambda", i64::from(den), lambda.0, lambda.1)?);
    for (p, &a) in a_list.iter().enumerate() {
        let names: Vec<String> = (1..a).map(|i| point_var(i, p)).collect();
        for n in &names {
            b = b.var(VarSpec::integer(n, 0, x_deg));
        }
        if !names.is_empty() {
            let w: Vec<(&str, i64)> = names.iter().map(|n| (n.as_str(), 1)).collect();
            b = b.cap(&w, x_deg);
        }
    }
    b.build()
}

impl LocalBlock {
    pub fn new(
        d: u32,
        a_list: Vec<u32>,
        slots: usize,
        x_deg: i64,
        lambda: (&Rational, &Rational),
    ) -> Result<LocalBlock> {
        if a_list.contains(&0) {
            return Err(usage("stack orders must be positive"));
        }
        let ring = block_ring(&a_list, lambda, x_deg)?;
        Ok(LocalBlock { d, a_list, slots, x_deg, ring, entries: BTreeMap::new() })
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn a_list(&self) -> &[u32] {
        &self.a_list
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn entries(&self) -> &BTreeMap<Vec<Partition>, Series> {
        &self.entries
    }

    pub fn get(&self, boundary: &[Partition]) -> Option<&Series> {
        self.entries.get(boundary)
    }

    /// Sets the entry for `boundary`, moving `s` into the block ring.
    pub fn insert(&mut self, boundary: Vec<Partition>, s: &Series) -> Result<()> {
        if boundary.len() != self.slots || boundary.iter().any(|p| p.size() != self.d) {
            return Err(usage(format!("boundary must list {} partitions of {}", self.slots, self.d)));
        }
        let s = s.relabel(&self.ring, str::to_string)?;
        self.entries.insert(boundary, s);
        Ok(())
    }
}

/// `Z_d(0)(lambda; x)_{(mu),(a)}`, recovered from the rescaled identity
/// `lambda^{-d/a} Z(lambda; lambda^{i/a - 1} x_i) = i^{d - l(mu)} R_mu(lambda; 0; x)`.
pub fn cap_level0(a: u32, mu: &Partition, lambda_max: i64, x_deg: i64) -> Result<LocalBlock> {
    let mut block = LocalBlock::new(mu.size(), vec![a], 1, x_deg, (&int(-i64::from(mu.size())), &int(lambda_max)))?;
    let s = cap_series(a, mu, lambda_max, x_deg)?;
    block.insert(vec![mu.clone()], &s)?;
    Ok(block)
}

/// All `mu |- d` in one single-slot block.
pub fn cap_block(a: u32, d: u32, lambda_max: i64, x_deg: i64) -> Result<LocalBlock> {
    let mut block = LocalBlock::new(d, vec![a], 1, x_deg, (&int(-i64::from(d)), &int(lambda_max)))?;
    let series: Vec<(Partition, Series)> = partitions_of(d)
        .into_par_iter()
        .map(|mu| cap_series(a, &mu, lambda_max, x_deg).map(|s| (mu, s)))
        .collect::<Result<_>>()?;
    for (mu, s) in series {
        block.insert(vec![mu], &s)?;
    }
    Ok(block)
}

fn cap_series(a: u32, mu: &Partition, lambda_max: i64, x_deg: i64) -> Result<Series> {
    let d = i64::from(mu.size());
    let f = r_bullet_zero(a, mu, x_deg, lambda_max)?;
    let f = f.scale(&CycloNum::i_pow(f.field(), d - mu.len() as i64));
    let a64 = i64::from(a);
    // same variable names as the source, lambda on the 1/a lattice
    let mut b = Ring::builder(f.field()).var(VarSpec::new("lambda", a64, &int(-d), &int(lambda_max + x_deg + 1))?);
    // at x_deg = 0 only the x-free part is kept
    let names: Vec<String> = if x_deg > 0 { (1..a).map(x_name).collect() } else { Vec::new() };
    let dropped: Vec<String> = if x_deg > 0 { Vec::new() } else { (1..a).map(x_name).collect() };
    for n in &names {
        b = b.var(VarSpec::integer(n, 0, x_deg));
    }
    if !names.is_empty() {
        let w: Vec<(&str, i64)> = names.iter().map(|n| (n.as_str(), 1)).collect();
        b = b.cap(&w, x_deg);
    }
    let mid = b.build()?;
    let one = CycloNum::one(mid.field());
    let mut bindings = vec![("lambda", Series::var(&mid, "lambda")?)];
    for (i, n) in names.iter().enumerate() {
        let i = i as i64 + 1;
        let lam = Series::var_power(&mid, "lambda", &rat(a64 - i, a64), one.clone())?;
        bindings.push((n.as_str(), lam.mul(&Series::var(&mid, n)?)?));
    }
    for n in &dropped {
        bindings.push((n.as_str(), Series::zero(&mid)));
    }
    let shift = Series::var_power(&mid, "lambda", &rat(d, a64), one)?;
    let z = f.substitute(&bindings, &mid)?.mul(&shift)?;
    let target = block_ring(&[a], (&int(-d), &int(lambda_max)), x_deg)?;
    z.relabel(&target, |n| if n == "lambda" { n.to_string() } else { format!("{n}_0") })
}

/// `z_mu`-diagonal kernel `delta_{mu sigma} / z_mu` with two slots.
pub fn identity_block(d: u32) -> Result<LocalBlock> {
    let mut block = LocalBlock::new(d, Vec::new(), 2, 0, (&int(0), &int(0)))?;
    for mu in partitions_of(d) {
        let s = Series::from_rational(&block.ring, rat(1, mu.z() as i64));
        block.insert(vec![mu.clone(), mu], &s)?;
    }
    Ok(block)
}

/// Two-slot block `Phi_{nu mu}(i lambda tau)`; gluing two tubes adds framings.
pub fn tube_block(d: u32, tau: i64, lambda_max: i64) -> Result<LocalBlock> {
    let mut block = LocalBlock::new(d, Vec::new(), 2, 0, (&int(0), &int(lambda_max)))?;
    let rate = CycloNum::i_pow(block.ring.field(), 1).scale(&int(tau));
    for nu in partitions_of(d) {
        for mu in partitions_of(d) {
            let s = phi(&nu, &mu)?.expand(&block.ring, "lambda", &rate)?;
            block.insert(vec![nu.clone(), mu], &s)?;
        }
    }
    Ok(block)
}

/// `sum_{mu |- d} z_mu Z1_{(.., mu)} Z2_{(.., mu)}`, contracting slot `s1` of
/// `z1` with slot `s2` of `z2`. The result lists the remaining slots of `z1`
/// then those of `z2`, and the stack points of `z1` then those of `z2`.
pub fn glue(z1: &LocalBlock, s1: usize, z2: &LocalBlock, s2: usize) -> Result<LocalBlock> {
    if z1.d != z2.d {
        return Err(usage(format!("cannot glue degree {} to degree {}", z1.d, z2.d)));
    }
    if s1 >= z1.slots || s2 >= z2.slots {
        return Err(usage("gluing slot out of range"));
    }
    let l1 = &z1.ring.vars()[0];
    let l2 = &z2.ring.vars()[0];
    let lo = l1.min_exponent() + l2.min_exponent();
    let hi = (l1.max_exponent() + l2.min_exponent()).max(l2.max_exponent() + l1.min_exponent());
    let mut a_list = z1.a_list.clone();
    a_list.extend(&z2.a_list);
    let mut out = LocalBlock::new(z1.d, a_list, z1.slots + z2.slots - 2, z1.x_deg.max(z2.x_deg), (&lo, &hi))?;
    let offset = z1.a_list.len();
    let shifted = |n: &str| shift_point(n, offset);
    let left: Vec<(&Vec<Partition>, Series)> =
        z1.entries.iter().map(|(k, s)| Ok((k, s.relabel(&out.ring, str::to_string)?))).collect::<Result<_>>()?;
    let right: Vec<(&Vec<Partition>, Series)> =
        z2.entries.iter().map(|(k, s)| Ok((k, s.relabel(&out.ring, shifted)?))).collect::<Result<_>>()?;
    let parts: Vec<Vec<(Vec<Partition>, Series)>> = partitions_of(z1.d)
        .into_par_iter()
        .map(|mu| {
            let w = int(mu.z() as i64);
            let mut acc = Vec::new();
            for (k1, a) in left.iter().filter(|(k, _)| k[s1] == mu) {
                for (k2, b) in right.iter().filter(|(k, _)| k[s2] == mu) {
                    let mut key: Vec<Partition> =
                        k1.iter().enumerate().filter(|(i, _)| *i != s1).map(|(_, p)| p.clone()).collect();
                    key.extend(k2.iter().enumerate().filter(|(i, _)| *i != s2).map(|(_, p)| p.clone()));
                    acc.push((key, a.mul(b)?.scale_rational(&w)));
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    for (key, s) in parts.into_iter().flatten() {
        let merged = match out.entries.remove(&key) {
            Some(prev) => prev.add(&s)?,
            None => s,
        };
        out.entries.insert(key, merged);
    }
    Ok(out)
}

/// First boundary/coefficient where two blocks differ inside `lambda <= lambda_max`.
pub fn block_difference(x: &LocalBlock, y: &LocalBlock, lambda_max: i64) -> Result<Option<String>> {
    if x.d != y.d || x.slots != y.slots || x.a_list != y.a_list {
        return Ok(Some("block shapes differ".into()));
    }
    let lv = &x.ring.vars()[0];
    let window = block_ring(&x.a_list, (&lv.min_exponent(), &int(lambda_max)), x.x_deg.max(y.x_deg))?;
    let zero = Series::zero(&x.ring);
    let keys: std::collections::BTreeSet<&Vec<Partition>> = x.entries.keys().chain(y.entries.keys()).collect();
    for k in keys {
        let a = x.entries.get(k).unwrap_or(&zero).relabel(&window, str::to_string)?;
        let b = y.entries.get(k).map_or_else(|| Ok(Series::zero(&window)), |s| s.relabel(&window, str::to_string))?;
        if let Some(m) = a.first_difference(&b, &window)? {
            let label: Vec<String> = k.iter().map(Partition::label).collect();
            return Ok(Some(format!("boundary {} {m}", label.join(";"))));
        }
    }
    Ok(None)
}

/// Identity kernel on both sides, associativity of three two-slot blocks,
/// tubes adding framings, and the `a = 1` cap against `G_mu` for every `d <= d_max`.
pub fn gluing_check(d_max: u32, lambda_max: i64) -> Result<Report> {
    let mut report = Report::new(format!("gluing d<={d_max} lambda<={lambda_max}"));
    for d in 1..=d_max {
        // room for the negative valuations of the factors
        let top = lambda_max + 2 * i64::from(d) + 2;
        let id = identity_block(d)?;
        let t1 = tube_block(d, 1, top)?;
        let t2 = tube_block(d, -2, top)?;
        let cap1 = cap_block(1, d, top, 0)?;
        let cap2 = cap_block(2, d, top, 2)?;
        // two-slot block with a stack point on each side
        let pair = outer(&cap2, &cap1)?;
        let mut diff = |name: &str, x: &LocalBlock, y: &LocalBlock| -> Result<()> {
            let m = block_difference(x, y, lambda_max)?;
            report.check(m.is_none(), || format!("d={d} {name}: {}", m.unwrap()));
            Ok(())
        };
        diff("left identity", &glue(&id, 1, &cap2, 0)?, &cap2)?;
        diff("right identity", &glue(&cap2, 0, &id, 0)?, &cap2)?;
        diff("identity on a tube", &glue(&t1, 1, &id, 0)?, &t1)?;
        diff("tube composition", &glue(&t1, 1, &t2, 0)?, &tube_block(d, -1, top)?)?;
        let left = glue(&glue(&pair, 1, &t1, 0)?, 1, &t2, 0)?;
        let right = glue(&pair, 1, &glue(&t1, 1, &t2, 0)?, 0)?;
        diff("associativity", &left, &right)?;
        let closed_left = glue(&glue(&cap2, 0, &t1, 0)?, 0, &cap1, 0)?;
        let closed_right = glue(&cap2, 0, &glue(&t1, 1, &cap1, 0)?, 0)?;
        diff("closed associativity", &closed_left, &closed_right)?;
        for row in closed_left.table() {
            let b = crate::exactnum::parse_rational(&row.b)?;
            report.check(b.is_integer(), || format!("d={d} closed block has lambda^{}", row.b));
        }
        for mu in partitions_of(d) {
            let z = cap1.get(std::slice::from_ref(&mu)).cloned().unwrap_or_else(|| Series::zero(&cap1.ring));
            let g = crate::gw_vertex::g_bullet_mu(1, &mu, 0, lambda_max)?;
            let l = lambda_ring(1, (-i64::from(d), lambda_max), 0)?;
            let shift = Series::var_power(
                &l,
                "lambda",
                &int(i64::from(d)),
                CycloNum::i_pow(l.field(), i64::from(d) - mu.len() as i64),
            )?;
            let rhs = g.mul(&shift)?;
            let lhs = z.relabel(&l, str::to_string)?;
            let window = lambda_ring(1, (0, lambda_max), 0)?;
            let m = lhs.first_difference(&rhs, &window)?;
            report.check(m.is_none(), || format!("a=1 cap mu={mu}: {}", m.unwrap()));
        }
    }
    Ok(report)
}

/// Disconnected union: `Z_{(alpha, beta)} = X_alpha Y_beta`.
pub fn outer(x: &LocalBlock, y: &LocalBlock) -> Result<LocalBlock> {
    if x.d != y.d {
        return Err(usage("outer product needs equal degrees"));
    }
    let lx = &x.ring.vars()[0];
    let ly = &y.ring.vars()[0];
    let lo = lx.min_exponent() + ly.min_exponent();
    let hi = (lx.max_exponent() + ly.min_exponent()).max(ly.max_exponent() + lx.min_exponent());
    let mut a_list = x.a_list.clone();
    a_list.extend(&y.a_list);
    let mut out = LocalBlock::new(x.d, a_list, x.slots + y.slots, x.x_deg.max(y.x_deg), (&lo, &hi))?;
    let offset = x.a_list.len();
    for (kx, sx) in &x.entries {
        let sx = sx.relabel(&out.ring, str::to_string)?;
        for (ky, sy) in &y.entries {
            let sy = sy.relabel(&out.ring, |n| shift_point(n, offset))?;
            let mut key = kx.clone();
            key.extend(ky.iter().cloned());
            out.entries.insert(key, sx.mul(&sy)?);
        }
    }
    Ok(out)
}

fn shift_point(name: &str, offset: usize) -> String {
    match name.rsplit_once('_') {
        Some((x, p)) => format!("{x}_{}", p.parse::<usize>().expect("point index") + offset),
        None => name.to_string(),
    }
}

/// One coefficient `Z^{b,gamma}_d` of a block.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub d: u32,
    pub boundary: String,
    pub b: String,
    pub gamma: String,
    pub value: String,
}

fn format_value(c: &CycloNum) -> String {
    match c.as_rational() {
        Some(r) => format_rational(r),
        None => {
            let v: Vec<String> = c.coeffs().iter().map(format_rational).collect();
            format!("[{}]", v.join(","))
        }
    }
}

impl LocalBlock {
    /// Rows ordered by boundary, then by exponent.
    pub fn table(&self) -> Vec<TableRow> {
        let vars = self.ring.vars();
        let mut rows = Vec::new();
        for (k, s) in &self.entries {
            let boundary: Vec<String> = k.iter().map(Partition::label).collect();
            for (e, c) in s.terms() {
                let ex = self.ring.exponents(e);
                let mut per_point: Vec<Vec<String>> = vec![Vec::new(); self.a_list.len()];
                for (v, x) in vars.iter().zip(&ex).skip(1) {
                    let (name, p) = v.name().rsplit_once('_').expect("point variables carry a point index");
                    let p: usize = p.parse().expect("point index");
                    for _ in 0..x.to_integer().try_into().unwrap_or(0u64) {
                        per_point[p].push(name.trim_start_matches('x').to_string());
                    }
                }
                let gamma: Vec<String> = per_point.iter().map(|g| g.join("+")).collect();
                rows.push(TableRow {
                    d: self.d,
                    boundary: boundary.join(";"),
                    b: format_rational(&ex[0]),
                    gamma: gamma.join("|"),
                    value: format_value(c),
                });
            }
        }
        rows
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Canonical JSON form of a block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalBlockJson {
    pub d: u32,
    pub a_list: Vec<u32>,
    pub slots: usize,
    pub x_deg: i64,
    pub entries: Vec<BlockEntryJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockEntryJson {
    pub boundary: Vec<Partition>,
    pub series: SeriesJson,
}

impl LocalBlock {
    pub fn to_json(&self) -> LocalBlockJson {
        LocalBlockJson {
            d: self.d,
            a_list: self.a_list.clone(),
            slots: self.slots,
            x_deg: self.x_deg,
            entries: self
                .entries
                .iter()
                .map(|(k, s)| BlockEntryJson { boundary: k.clone(), series: s.to_json() })
                .collect(),
        }
    }

    pub fn from_json(j: &LocalBlockJson) -> Result<LocalBlock> {
        let lambda = match j.entries.first() {
            Some(e) => {
                let v = e.series.vars.first().ok_or_else(|| usage("entry series has no lambda"))?;
                (crate::exactnum::parse_rational(&v.min)?, crate::exactnum::parse_rational(&v.max)?)
            }
            None => (Rational::zero(), Rational::zero()),
        };
        let mut block = LocalBlock::new(j.d, j.a_list.clone(), j.slots, j.x_deg, (&lambda.0, &lambda.1))?;
        for e in &j.entries {
            let s = Series::from_json(&e.series)?;
            block.insert(e.boundary.clone(), &s)?;
        }
        Ok(block)
    }
}

/// Writes the coefficient table as CSV `(d, boundary, b, gamma, value)` or as
/// the block's JSON form.
pub fn write_table<W: Write>(block: &LocalBlock, format: TableFormat, mut out: W) -> Result<()> {
    match format {
        TableFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(["d", "boundary", "b", "gamma", "value"])?;
            for row in block.table() {
                w.serialize(&row)?;
            }
            w.flush()?;
        }
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &block.to_json())?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

pub fn emit_table(block: &LocalBlock, format: TableFormat, path: &Path) -> Result<()> {
    let f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_table(block, format, f)
}

/// Reads a block written by [`emit_table`] or wrapped in the CLI's JSON envelope.
pub fn read_block(path: &Path) -> Result<LocalBlock> {
    let text = std::fs::read_to_string(path)?;
    let mut v: serde_json::Value = serde_json::from_str(&text)?;
    if let Some(inner) = v.get_mut("result") {
        v = inner.take();
    }
    let j: LocalBlockJson = serde_json::from_value(v)?;
    LocalBlock::from_json(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw_vertex::g_bullet_mu;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn a1_cap_is_lambda_times_the_disk() {
        let z = cap_level0(1, &p(&[1]), 5, 0).unwrap();
        let s = z.get(&[p(&[1])]).unwrap();
        assert!(s.coeff_of(&[("lambda", int(0))]).unwrap().is_one());
        assert_eq!(s.coeff_of(&[("lambda", int(2))]).unwrap().as_rational().unwrap(), &rat(1, 24));
        let g = g_bullet_mu(1, &p(&[1]), 0, 5).unwrap();
        assert_eq!(g.coeff_of(&[("lambda", int(1))]).unwrap(), s.coeff_of(&[("lambda", int(2))]).unwrap());
    }

    #[test]
    fn a2_exponents_are_integral_under_parity() {
        let z = cap_level0(2, &p(&[1]), 4, 3).unwrap();
        let s = z.get(&[p(&[1])]).unwrap();
        assert!(!s.is_empty());
        for row in z.table() {
            assert!(crate::exactnum::parse_rational(&row.b).unwrap().is_integer(), "{row:?}");
            let n = row.gamma.split('+').filter(|g| !g.is_empty()).count();
            assert_eq!((1 + n) % 2, 0, "parity {row:?}");
        }
    }

    #[test]
    fn identity_is_two_sided() {
        let cap = cap_block(2, 2, 3, 2).unwrap();
        let id = identity_block(2).unwrap();
        let left = glue(&id, 1, &cap, 0).unwrap();
        assert!(block_difference(&left, &cap, 3).unwrap().is_none());
        let t = tube_block(2, 1, 4).unwrap();
        let right = glue(&t, 1, &id, 0).unwrap();
        assert!(block_difference(&right, &t, 4).unwrap().is_none());
    }

    #[test]
    fn tubes_add_framings() {
        let t1 = tube_block(2, 1, 5).unwrap();
        let t2 = tube_block(2, 2, 5).unwrap();
        let t3 = tube_block(2, 3, 5).unwrap();
        assert!(block_difference(&glue(&t1, 1, &t2, 0).unwrap(), &t3, 5).unwrap().is_none());
    }

    #[test]
    fn degree_one_closed_pairing() {
        let c = cap_block(1, 1, 4, 0).unwrap();
        let z = glue(&c, 0, &c, 0).unwrap();
        assert_eq!(z.slots(), 0);
        let s = z.get(&[]).unwrap();
        // (lambda / (2 sin(lambda/2)))^2 = 1 + lambda^2/12 + ...
        assert!(s.coeff_of(&[("lambda", int(0))]).unwrap().is_one());
        assert_eq!(s.coeff_of(&[("lambda", int(2))]).unwrap().as_rational().unwrap(), &rat(1, 12));
        assert!(glue(&c, 0, &cap_block(1, 2, 3, 0).unwrap(), 0).is_err());
    }

    #[test]
    fn gluing_suite_small() {
        let r = gluing_check(2, 3).unwrap();
        assert!(r.passed, "{:?}", r.first_failure);
    }

    #[test]
    fn empty_cap_is_one() {
        let z = cap_level0(3, &Partition::empty(), 2, 2).unwrap();
        let s = z.get(&[Partition::empty()]).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.coeff_of(&[]).unwrap().is_one());
    }

    #[test]
    fn csv_and_json() {
        let dir = tempfile::tempdir().unwrap();
        let z = cap_block(2, 1, 3, 2).unwrap();
        let csv_path = dir.path().join("z.csv");
        emit_table(&z, TableFormat::Csv, &csv_path).unwrap();
        let text = std::fs::read_to_string(&csv_path).unwrap();
        assert!(text.starts_with("d,boundary,b,gamma,value\n"));
        let json_path = dir.path().join("z.json");
        emit_table(&z, TableFormat::Json, &json_path).unwrap();
        let back = read_block(&json_path).unwrap();
        assert_eq!(back.to_json(), z.to_json());
        let empty = LocalBlock::new(1, vec![1], 1, 0, (&int(0), &int(0))).unwrap();
        emit_table(&empty, TableFormat::Csv, &csv_path).unwrap();
        assert_eq!(std::fs::read_to_string(&csv_path).unwrap(), "d,boundary,b,gamma,value\n");
    }
}
