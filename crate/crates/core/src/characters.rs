//! Symmetric group characters and Schur functions on colored geometric alphabets.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{usage, Error, Result};
use crate::exactnum::{int, rat, CycloField, CycloNum, Rational};
use crate::partitions::{partitions_of, Partition};
use crate::series::{Ring, Series, VarSpec};

/// All characters of `S_d`, rows and columns in [`partitions_of`] order.
#[derive(Debug)]
pub struct CharacterTable {
    d: u32,
    parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    fn build(d: u32) -> CharacterTable {
        let parts = partitions_of(d);
        let index = parts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let values = parts
            .par_iter()
            .map(|nu| {
                let mut memo = HashMap::new();
                parts.iter().map(|mu| mn(nu, mu.parts(), &mut memo)).collect()
            })
            .collect();
        CharacterTable { d, parts, index, values }
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    pub fn get(&self, nu: &Partition, mu: &Partition) -> Result<i64> {
        let i = self.index.get(nu).ok_or_else(|| usage(format!("{nu} is not a partition of {}", self.d)))?;
        let j = self.index.get(mu).ok_or_else(|| usage(format!("{mu} is not a partition of {}", self.d)))?;
        Ok(self.values[*i][*j])
    }

    pub fn row(&self, nu: &Partition) -> Result<&[i64]> {
        let i = self.index.get(nu).ok_or_else(|| usage(format!("{nu} is not a partition of {}", self.d)))?;
        Ok(&self.values[*i])
    }
}

/// Cached character table of `S_d`.
pub fn character_table(d: u32) -> Arc<CharacterTable> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<CharacterTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.lock().unwrap().get(&d) {
        return t.clone();
    }
    let t = Arc::new(CharacterTable::build(d));
    tables.lock().unwrap().entry(d).or_insert(t).clone()
}

/// `chi_nu` on the class of cycle type `mu` (Murnaghan-Nakayama).
pub fn chi(nu: &Partition, mu: &Partition) -> Result<i64> {
    if nu.size() != mu.size() {
        return Err(usage(format!("|{nu}| != |{mu}|")));
    }
    character_table(nu.size()).get(nu, mu)
}

/// Removes rim hooks of length `cycles[0]`, recursing on the rest.
fn mn(shape: &Partition, cycles: &[u32], memo: &mut HashMap<(Partition, Vec<u32>), i64>) -> i64 {
    let Some((&k, rest)) = cycles.split_first() else {
        return 1;
    };
    let key = (shape.clone(), cycles.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let l = shape.len() as u32;
    let beta: Vec<u32> = shape.parts().iter().enumerate().map(|(i, &p)| p + l - 1 - i as u32).collect();
    let mut total = 0;
    for (pos, &b) in beta.iter().enumerate() {
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let between = beta.iter().filter(|&&c| c > b - k && c < b).count();
        let mut next = beta.clone();
        next[pos] = b - k;
        next.sort_unstable_by(|x, y| y.cmp(x));
        let parts = next.iter().enumerate().map(|(i, &c)| c - (l - 1 - i as u32)).collect();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn(&Partition::new(parts), rest, memo);
    }
    memo.insert(key, total);
    total
}

type Poly = HashMap<Vec<u8>, i64>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Schur polynomial in `n` variables as a sum over semistandard tableaux.
fn schur_by_tableaux(nu: &Partition, n: usize) -> Poly {
    let cells: Vec<(usize, usize)> =
        nu.parts().iter().enumerate().flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c))).collect();
    let mut fill: HashMap<(usize, usize), usize> = HashMap::new();
    let mut out = Poly::new();
    fn rec(idx: usize, cells: &[(usize, usize)], n: usize, fill: &mut HashMap<(usize, usize), usize>, out: &mut Poly) {
        if idx == cells.len() {
            let mut e = vec![0u8; n];
            for v in fill.values() {
                e[*v] += 1;
            }
            *out.entry(e).or_insert(0) += 1;
            return;
        }
        let (r, c) = cells[idx];
        let mut lo = 0;
        if c > 0 {
            lo = lo.max(fill[&(r, c - 1)]);
        }
        if r > 0 {
            lo = lo.max(fill[&(r - 1, c)] + 1);
        }
        for v in lo..n {
            fill.insert((r, c), v);
            rec(idx + 1, cells, n, fill, out);
        }
        fill.remove(&(r, c));
    }
    rec(0, &cells, n, &mut fill, &mut out);
    out
}

/// Characters from the Frobenius expansion `p_mu = sum_nu chi_nu(mu) s_nu`
/// in `d` variables, solved by matching dominant monomials.
pub fn chi_oracle(nu: &Partition, mu: &Partition) -> Result<i64> {
    let d = nu.size();
    if mu.size() != d {
        return Err(usage(format!("|{nu}| != |{mu}|")));
    }
    if d > 5 {
        return Err(Error::Guard(format!("character oracle limited to d <= 5, got {d}")));
    }
    let n = d as usize;
    let mut rest: Poly = [(vec![0u8; n], 1)].into_iter().collect();
    for &k in mu.parts() {
        let mut pk = Poly::new();
        for v in 0..n {
            let mut e = vec![0u8; n];
            e[v] = k as u8;
            pk.insert(e, 1);
        }
        rest = poly_mul(&rest, &pk);
    }
    // reverse lexicographic: every s_lambda only has monomials lex-below lambda
    for lam in partitions_of(d) {
        let mut key = vec![0u8; n];
        for (i, &p) in lam.parts().iter().enumerate() {
            key[i] = p as u8;
        }
        let c = rest.get(&key).copied().unwrap_or(0);
        if lam == *nu {
            return Ok(c);
        }
        if c != 0 {
            for (e, v) in schur_by_tableaux(&lam, n) {
                *rest.entry(e).or_insert(0) -= c * v;
            }
        }
    }
    unreachable!("nu is a partition of d")
}

/// Sign of the alphabet: `+` is `Q = (1, q, q^2, ...)`, `-` replaces `q` by `-q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlphabetSign {
    Plus,
    Minus,
}

impl AlphabetSign {
    pub fn factor(self) -> i64 {
        match self {
            AlphabetSign::Plus => 1,
            AlphabetSign::Minus => -1,
        }
    }
}

/// Window of a token ring in `q, q_1, ..., q_{a-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TokenWindow {
    /// Laurent floor and truncation order of `q`.
    pub q: (Rational, Rational),
    /// Common floor and truncation order of the `q_l`.
    pub ql: (Rational, Rational),
    /// Optional cap on the total renormalized volume `a r + sum s_l`.
    pub volume: Option<i64>,
}

impl TokenWindow {
    /// Integer window `0 <= q <= order`, `q_l` in `[-spread, spread]`.
    pub fn simple(order: i64, spread: i64) -> TokenWindow {
        TokenWindow { q: (int(0), int(order)), ql: (int(-spread), int(spread)), volume: None }
    }
}

pub fn q_name(l: u32) -> String {
    format!("q{l}")
}

/// Ring in the DT tokens: `q` on the `(1/2)Z` lattice, `q_l` on `(1/a)Z`,
/// graded by renormalized volume.
pub fn token_ring(a: u32, w: &TokenWindow) -> Result<Arc<Ring>> {
    let field = CycloField::for_modulus(a);
    let a64 = i64::from(a);
    let mut b = Ring::builder(&field).var(VarSpec::new("q", 2, &w.q.0, &w.q.1)?).grade("q", 2 * a64);
    for l in 1..a {
        b = b.var(VarSpec::new(q_name(l), a64, &w.ql.0, &w.ql.1)?).grade(&q_name(l), 2);
    }
    if let Some(v) = w.volume {
        // volume * 2a = a^2 num(q) + 2 num(q_l)
        let names: Vec<String> = (1..a).map(q_name).collect();
        let mut weights: Vec<(&str, i64)> = vec![("q", a64 * a64)];
        weights.extend(names.iter().map(|n| (n.as_str(), 2)));
        b = b.cap(&weights, 2 * a64 * v);
    }
    b.build()
}

/// `T_l^k = (q_{l+1} ... q_{a-1})^k` as a monomial in `ring`.
fn block_monomial(ring: &Arc<Ring>, a: u32, l: u32, k: u32) -> Result<Series> {
    let mut exps = vec![int(0); ring.vars().len()];
    for m in l + 1..a {
        let i = ring.var_index(&q_name(m)).ok_or_else(|| usage("token ring lacks a q_l variable"))?;
        exps[i] = int(i64::from(k));
    }
    Series::monomial(ring, &exps, CycloNum::one(ring.field()))
}

/// `p_k` on the colored alphabet: `sum_l T_l^k / (1 - (sign q)^k)`.
pub fn powersum_colored(k: u32, a: u32, sign: AlphabetSign, ring: &Arc<Ring>) -> Result<Series> {
    if k == 0 {
        return Err(usage("power sums are indexed from 1"));
    }
    let coeff = if sign == AlphabetSign::Minus && k % 2 == 1 { -1 } else { 1 };
    let qk = Series::var_power(ring, "q", &int(i64::from(k)), CycloNum::from_int(ring.field(), coeff))?;
    let geo = Series::one(ring).sub(&qk)?.invert()?;
    let mut blocks = Series::zero(ring);
    for l in 0..a {
        blocks = blocks.add(&block_monomial(ring, a, l, k)?)?;
    }
    blocks.mul(&geo)
}

/// `s_nu = sum_mu chi_nu(mu)/z_mu p_mu`, given the power sums.
pub fn schur_from_powersums<F>(nu: &Partition, ring: &Arc<Ring>, mut p: F) -> Result<Series>
where
    F: FnMut(u32) -> Result<Series>,
{
    let d = nu.size();
    if d == 0 {
        return Ok(Series::one(ring));
    }
    let mut cache: HashMap<u32, Series> = HashMap::new();
    let table = character_table(d);
    let mut out = Series::zero(ring);
    for mu in table.partitions() {
        let c = table.get(nu, mu)?;
        if c == 0 {
            continue;
        }
        let mut term = Series::from_rational(ring, rat(c, mu.z() as i64));
        for &k in mu.parts() {
            if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(k) {
                e.insert(p(k)?);
            }
            term = term.mul(&cache[&k])?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// `s_nu = det(e_{nu'_i - i + j})` with `e_k` from Newton's identities.
pub fn schur_jacobi_trudi<F>(nu: &Partition, ring: &Arc<Ring>, mut p: F) -> Result<Series>
where
    F: FnMut(u32) -> Result<Series>,
{
    let conj = nu.conjugate();
    let n = conj.len();
    if n == 0 {
        return Ok(Series::one(ring));
    }
    let top = conj.parts()[0] as usize + n;
    let mut ps = Vec::with_capacity(top + 1);
    ps.push(Series::zero(ring));
    for k in 1..=top {
        ps.push(p(k as u32)?);
    }
    // k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i
    let mut e = vec![Series::one(ring)];
    for k in 1..=top {
        let mut acc = Series::zero(ring);
        for i in 1..=k {
            let t = e[k - i].mul(&ps[i])?;
            acc = if i % 2 == 1 { acc.add(&t)? } else { acc.sub(&t)? };
        }
        e.push(acc.scale_rational(&rat(1, k as i64)));
    }
    let entry = |i: usize, j: usize| -> Series {
        let idx = conj.parts()[i] as i64 - i as i64 + j as i64;
        if idx < 0 {
            Series::zero(ring)
        } else {
            e[idx as usize].clone()
        }
    };
    let matrix: Vec<Vec<Series>> = (0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect();
    determinant(&matrix, ring)
}

fn determinant(m: &[Vec<Series>], ring: &Arc<Ring>) -> Result<Series> {
    let n = m.len();
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc = Series::zero(ring);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Series>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, s)| s.clone()).collect())
            .collect();
        let t = m[0][j].mul(&determinant(&minor, ring)?)?;
        acc = if j % 2 == 0 { acc.add(&t)? } else { acc.sub(&t)? };
    }
    Ok(acc)
}

/// `s_nu` on the colored alphabet via the character expansion.
pub fn schur_at_colored(nu: &Partition, a: u32, sign: AlphabetSign, ring: &Arc<Ring>) -> Result<Series> {
    schur_from_powersums(nu, ring, |k| powersum_colored(k, a, sign, ring))
}

/// `s_nu` on the colored alphabet via the dual Jacobi-Trudi determinant.
pub fn schur_at_colored_jt(nu: &Partition, a: u32, sign: AlphabetSign, ring: &Arc<Ring>) -> Result<Series> {
    schur_jacobi_trudi(nu, ring, |k| powersum_colored(k, a, sign, ring))
}
