//! The GW side: framing-zero caps, `G_mu = [p_mu] exp(G)`, quantum
//! dimensions, framing transport, and the abelian-group lift.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::characters::{character_table, AlphabetSign};
use crate::dt_vertex::{lambda_ring, x_name, ChangeOfVars, TokenMonomial, VertexExpr};
use crate::error::{usage, Error, Result};
use crate::exactnum::{int, rat, CycloField, CycloNum, Rational};
use crate::hurwitz::phi;
use crate::partitions::{gamma_vectors, partitions_of, ColorVector, Partition};
use crate::report::Report;
use crate::series::{Ring, Series, VarSpec};

pub fn p_name(k: u32) -> String {
    format!("p{k}")
}

/// Ring in `lambda`, `p_1..p_{d_max}` (weighted cap `sum k e_k <= d_max`) and
/// `x_1..x_{a-1}` (total cap `x_deg`), graded by p-weight plus x-degree.
pub fn gw_ring(a: u32, d_max: u32, lambda: (i64, i64), x_deg: i64) -> Result<Arc<Ring>> {
    let field = CycloField::for_modulus(a);
    let mut b = Ring::builder(&field).var(VarSpec::integer("lambda", lambda.0, lambda.1));
    let pn: Vec<String> = (1..=d_max).map(p_name).collect();
    for (k, n) in pn.iter().enumerate() {
        b = b.var(VarSpec::integer(n, 0, i64::from(d_max) / (k as i64 + 1))).grade(n, k as i64 + 1);
    }
    let xn: Vec<String> = if x_deg > 0 { (1..a).map(x_name).collect() } else { Vec::new() };
    for n in &xn {
        b = b.var(VarSpec::integer(n, 0, x_deg)).grade(n, 1);
    }
    let pw: Vec<(&str, i64)> = pn.iter().enumerate().map(|(k, n)| (n.as_str(), k as i64 + 1)).collect();
    b = b.cap(&pw, i64::from(d_max));
    if !xn.is_empty() {
        let xw: Vec<(&str, i64)> = xn.iter().map(|n| (n.as_str(), 1)).collect();
        b = b.cap(&xw, x_deg);
    }
    b.build()
}

/// Exponents fixing `p_mu` for [`Series::extract`].
fn p_exponents(mu: &Partition, d_max: u32) -> Result<Vec<(String, Rational)>> {
    if mu.size() > d_max {
        return Err(usage(format!("|{mu}| exceeds the p-degree cap {d_max}")));
    }
    let m = mu.multiplicities();
    Ok((1..=d_max).map(|k| (p_name(k), int(i64::from(*m.get(k as usize).unwrap_or(&0))))).collect())
}

/// `G_{(d),gamma}(lambda; 0)_a`.
#[derive(Clone, Debug)]
pub struct GwCap {
    pub a: u32,
    pub d: u32,
    pub gamma: ColorVector,
    pub series: Series,
}

/// Constant in front of `1/sin(d lambda/2)`, or `None` off parity.
pub fn cap_constant(a: u32, d: u32, gamma: &ColorVector, field: &Arc<CycloField>) -> Result<Option<CycloNum>> {
    if gamma.modulus() != a {
        return Err(usage("color vector modulus differs from a"));
    }
    let (a64, d64, sum) = (i64::from(a), i64::from(d), i64::from(gamma.sum()));
    if (d64 - sum).rem_euclid(a64) != 0 {
        return Ok(None);
    }
    let n = gamma.len() as i32;
    let i_exp = 1 - d64 + 2 * (d64 - sum) / a64;
    let sign = if (n - 1).rem_euclid(2) == 0 { 1 } else { -1 };
    let mag = num_traits::pow::Pow::pow(&int(d64), n - 1) / num_traits::pow::Pow::pow(&int(a64), n - 1);
    let c = mag * rat(sign, 2 * gamma.aut() as i64);
    Ok(Some(CycloNum::i_pow(field, i_exp).scale(&c)))
}

/// `(-1)^{n-1} i^{1-d+2(d-sum gamma)/a} d^{n-1} / (2 a^{n-1} sin(d lambda/2) |Aut gamma|)`,
/// zero off parity.
pub fn cap_closed_form(a: u32, d: u32, gamma: &ColorVector, ring: &Arc<Ring>) -> Result<GwCap> {
    let series = match cap_constant(a, d, gamma, ring.field())? {
        None => Series::zero(ring),
        Some(c) => Series::sin_linear(ring, "lambda", &rat(i64::from(d), 2))?.invert()?.scale(&c),
    };
    Ok(GwCap { a, d, gamma: gamma.clone(), series })
}

/// `G(lambda; 0; p; x) = sum_{d, gamma} G_{(d),gamma} p_d x_gamma` in a [`gw_ring`].
pub fn assemble_g0(a: u32, d_max: u32, x_deg: i64, ring: &Arc<Ring>) -> Result<Series> {
    let mut g = Series::zero(ring);
    let gammas = gamma_vectors(a, x_deg.max(0) as usize);
    for d in 1..=d_max {
        let inv_sin = Series::sin_linear(ring, "lambda", &rat(i64::from(d), 2))?.invert()?;
        for gamma in &gammas {
            let Some(c) = cap_constant(a, d, gamma, ring.field())? else { continue };
            let mut exps = vec![Rational::zero(); ring.vars().len()];
            exps[ring.var_index(&p_name(d)).unwrap()] = int(1);
            for (i, e) in gamma.x_exponents().iter().enumerate().filter(|(_, e)| **e != 0) {
                exps[ring.var_index(&x_name(i as u32 + 1)).unwrap()] = int(*e);
            }
            let mono = Series::monomial(ring, &exps, c)?;
            g = g.add(&inv_sin.mul(&mono)?)?;
        }
    }
    Ok(g)
}

/// `G^bullet = exp(G)` at framing zero, with per-`mu` extraction.
pub struct GwSide {
    a: u32,
    d_max: u32,
    target: Arc<Ring>,
    bullet: Series,
}

impl GwSide {
    pub fn new(a: u32, d_max: u32, lambda_max: i64, x_deg: i64) -> Result<GwSide> {
        let d = i64::from(d_max);
        let work = gw_ring(a, d_max, (-d - 1, lambda_max + d + 3), x_deg)?;
        let bullet = assemble_g0(a, d_max, x_deg, &work)?.exp()?;
        let target = lambda_ring(a, (-d, lambda_max), x_deg)?;
        Ok(GwSide { a, d_max, target, bullet })
    }

    pub fn modulus(&self) -> u32 {
        self.a
    }

    /// Full `exp(G)` in the working ring.
    pub fn bullet(&self) -> &Series {
        &self.bullet
    }

    /// `G^bullet_mu(lambda; 0; x) = [p_mu] exp(G)`.
    pub fn g_bullet_mu(&self, mu: &Partition) -> Result<Series> {
        let fixed = p_exponents(mu, self.d_max)?;
        let f: Vec<(&str, Rational)> = fixed.iter().map(|(n, r)| (n.as_str(), r.clone())).collect();
        self.bullet.extract(&f, &self.target)
    }
}

pub fn g_bullet_mu(a: u32, mu: &Partition, x_deg: i64, lambda_max: i64) -> Result<Series> {
    GwSide::new(a, mu.size().max(1), lambda_max, x_deg)?.g_bullet_mu(mu)
}

/// `V_nu(lambda)` from the sine-product formula, in a lambda-only ring.
pub fn quantum_dim_sine(nu: &Partition, ring: &Arc<Ring>) -> Result<Series> {
    let l = nu.len() as i64;
    let parts: Vec<i64> = nu.parts().iter().map(|&p| i64::from(p)).collect();
    let mut num = Series::one(ring);
    let mut den = Series::one(ring);
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let (ia, jb) = (i as i64 + 1, j as i64 + 1);
            num = num.mul(&Series::sin_linear(ring, "lambda", &rat(parts[i] - parts[j] + jb - ia, 2))?)?;
            den = den.mul(&Series::sin_linear(ring, "lambda", &rat(jb - ia, 2))?)?;
        }
    }
    for (i, &p) in parts.iter().enumerate() {
        for v in 1..=p {
            let s = Series::sin_linear(ring, "lambda", &rat(v - (i as i64 + 1) + l, 2))?;
            den = den.mul(&s.scale_rational(&int(2)))?;
        }
    }
    num.mul(&den.invert()?)
}

/// `V_nu = i^{|nu|} / prod_boxes (q^{h/2} - q^{-h/2})` with `q = e^{i lambda}`.
pub fn quantum_dim_hook(nu: &Partition, ring: &Arc<Ring>) -> Result<Series> {
    let field = ring.field();
    let i = CycloNum::i_pow(field, 1);
    let mut den = Series::one(ring);
    for h in nu.hooks() {
        let rate = i.scale(&rat(i64::from(h), 2));
        let f = Series::exp_linear(ring, "lambda", &rate)?.sub(&Series::exp_linear(ring, "lambda", &-&rate)?)?;
        den = den.mul(&f)?;
    }
    Ok(den.invert()?.scale(&CycloNum::i_pow(field, i64::from(nu.size()))))
}

/// `(q^{1/2} prod q_l^{-l/a})^{|mu|} sum_nu s_{nu'}(-q_.) chi_nu(mu)/z_mu`.
pub fn r_bullet_zero_expr(a: u32, mu: &Partition) -> Result<VertexExpr> {
    let table = character_table(mu.size());
    let mono = TokenMonomial::composite(a, i64::from(mu.size()));
    let mut out = VertexExpr::zero(a);
    for nu in partitions_of(mu.size()) {
        let c = table.get(&nu, mu)?;
        if c != 0 {
            let s = VertexExpr::schur(a, &nu.conjugate(), AlphabetSign::Minus);
            out = out.concat(s.times(&mono, &rat(c, mu.z() as i64)));
        }
    }
    Ok(out)
}

/// Working `(lambda, x)` ring with room for products of `d` poles.
fn work_ring(a: u32, d: u32, lambda_max: i64, x_deg: i64) -> Result<Arc<Ring>> {
    let d = i64::from(d);
    lambda_ring(a, (-d - 2, lambda_max + 3 * d + 4), x_deg)
}

/// `R^bullet_mu(lambda; 0; x)_a` via the change of variables, on
/// `lambda in [-|mu|, lambda_max]`.
pub fn r_bullet_zero(a: u32, mu: &Partition, x_deg: i64, lambda_max: i64) -> Result<Series> {
    let work = work_ring(a, mu.size(), lambda_max, x_deg)?;
    let s = ChangeOfVars::new(a, &work)?.apply(&r_bullet_zero_expr(a, mu)?)?;
    s.restrict(&lambda_ring(a, (-i64::from(mu.size()), lambda_max), x_deg)?)
}

/// `R^bullet_mu(lambda; tau; x)_a`.
#[derive(Clone, Debug)]
pub struct FramedVertex {
    pub a: u32,
    pub mu: Partition,
    pub tau: i64,
    pub series: Series,
}

/// `sum_nu R_nu z_nu Phi_{nu mu}(i lambda tau)` for a family `R_nu`, `nu |- d`.
pub fn transport(family: &[(Partition, Series)], mu: &Partition, tau: i64) -> Result<Series> {
    let Some((_, first)) = family.first() else {
        return Err(usage("empty family"));
    };
    let ring = first.ring().clone();
    let rate = CycloNum::i_pow(ring.field(), 1).scale(&int(tau));
    let mut out = Series::zero(&ring);
    for (nu, r) in family {
        let k = phi(nu, mu)?.expand(&ring, "lambda", &rate)?;
        out = out.add(&r.mul(&k)?.scale_rational(&int(nu.z() as i64)))?;
    }
    Ok(out)
}

/// The framing-zero family `R^bullet_nu(0)` for all `nu |- d` in a working ring.
fn r_family(a: u32, d: u32, work: &Arc<Ring>) -> Result<Vec<(Partition, Series)>> {
    let cov = ChangeOfVars::new(a, work)?;
    partitions_of(d).into_iter().map(|nu| Ok((nu.clone(), cov.apply(&r_bullet_zero_expr(a, &nu)?)?))).collect()
}

pub fn r_bullet_tau(a: u32, mu: &Partition, tau: i64, x_deg: i64, lambda_max: i64) -> Result<FramedVertex> {
    let work = work_ring(a, mu.size(), lambda_max, x_deg)?;
    let family = r_family(a, mu.size(), &work)?;
    let series = if tau == 0 {
        family.iter().find(|(nu, _)| nu == mu).map(|(_, s)| s.clone()).unwrap()
    } else {
        transport(&family, mu, tau)?
    };
    let target = lambda_ring(a, (-i64::from(mu.size()), lambda_max), x_deg)?;
    Ok(FramedVertex { a, mu: mu.clone(), tau, series: series.restrict(&target)? })
}

/// Transports `R(0)` to framing `tau` and back with `-tau` for every `mu |- d`.
pub fn framing_round_trip(a: u32, d: u32, tau: i64, x_deg: i64, lambda_max: i64) -> Result<Report> {
    let mut report = Report::new(format!("framing a={a} d={d} tau={tau}"));
    let work = work_ring(a, d, lambda_max, x_deg)?;
    let family = r_family(a, d, &work)?;
    let forward: Vec<(Partition, Series)> = partitions_of(d)
        .into_iter()
        .map(|mu| Ok((mu.clone(), transport(&family, &mu, tau)?)))
        .collect::<Result<_>>()?;
    let window = lambda_ring(a, (-i64::from(d), lambda_max), x_deg)?;
    for (mu, r0) in &family {
        let back = transport(&forward, mu, -tau)?;
        let diff = back.first_difference(r0, &window)?;
        report.check(diff.is_none(), || format!("mu={mu} {}", diff.unwrap()));
        if tau != 0 {
            let moved = forward.iter().find(|(m, _)| m == mu).unwrap().1.first_difference(r0, &window)?;
            if moved.is_none() && mu.size() > 1 {
                report.note(format!("mu={mu}: transport left the series unchanged"));
            }
        }
    }
    Ok(report)
}

/// Sine-product against hook form for every `|nu| <= max_size` through `lambda^order`.
pub fn quantum_dim_check(max_size: u32, order: i64) -> Result<Report> {
    let mut report = Report::new(format!("quantum-dim |nu|<={max_size} order={order}"));
    for n in 0..=max_size {
        for nu in partitions_of(n) {
            let l = nu.len() as i64;
            let val = i64::from(n) + l * (l - 1) / 2;
            let ring = lambda_ring(1, (-val - 1, order + 2 * val + 2), 0)?;
            let window = lambda_ring(1, (-i64::from(n), order), 0)?;
            let s = quantum_dim_sine(&nu, &ring)?;
            let h = quantum_dim_hook(&nu, &ring)?;
            let diff = s.first_difference(&h, &window)?;
            report.check(diff.is_none(), || format!("nu={nu} {}", diff.unwrap()));
        }
    }
    Ok(report)
}

/// Compares the colored-Schur route at `a = 1` with
/// `sum_nu chi_nu(mu)/z_mu e^{i kappa_nu lambda/4} V_nu(lambda)`.
pub fn mv_a1_check(mu: &Partition, lambda_max: i64) -> Result<Report> {
    let d = mu.size();
    let mut report = Report::new(format!("mv-a1 mu={mu}"));
    let work = work_ring(1, d, lambda_max, 0)?;
    let field = work.field().clone();
    let lhs = ChangeOfVars::new(1, &work)?.apply(&r_bullet_zero_expr(1, mu)?)?;
    let table = character_table(d);
    let mut rhs = Series::zero(&work);
    for nu in partitions_of(d) {
        let c = table.get(&nu, mu)?;
        if c == 0 {
            continue;
        }
        let rate = CycloNum::i_pow(&field, 1).scale(&rat(nu.kappa(), 4));
        let val = i64::from(d) + (nu.len() * nu.len().saturating_sub(1) / 2) as i64;
        let roomy = lambda_ring(1, (-val - 1, lambda_max + 2 * val + 2), 0)?;
        let v = quantum_dim_sine(&nu, &roomy)?.restrict(&lambda_ring(1, (-i64::from(d), lambda_max + 1), 0)?)?;
        let t = Series::exp_linear(&work, "lambda", &rate)?.mul(&v.relabel(&work, str::to_string)?)?;
        rhs = rhs.add(&t.scale_rational(&rat(c, mu.z() as i64)))?;
    }
    let window = lambda_ring(1, (-i64::from(d), lambda_max), 0)?;
    let diff = lhs.first_difference(&rhs, &window)?;
    report.check(diff.is_none(), || diff.unwrap().to_string());
    Ok(report)
}

/// `R^bullet(lambda; tau; p; x) = 1 + sum_{0 < |mu| <= d_max} R^bullet_mu(tau) p_mu` in a [`gw_ring`].
pub fn r_bullet_generating(a: u32, d_max: u32, tau: i64, x_deg: i64, ring: &Arc<Ring>) -> Result<Series> {
    let mut out = Series::one(ring);
    let lam_max = ring.vars()[0].max_exponent().to_integer();
    let lam_max = i64::try_from(lam_max).map_err(|_| usage("lambda window out of range"))?;
    for d in 1..=d_max {
        let work = work_ring(a, d, lam_max, x_deg)?;
        let family = r_family(a, d, &work)?;
        for mu in partitions_of(d) {
            let r = if tau == 0 {
                family.iter().find(|(nu, _)| *nu == mu).unwrap().1.clone()
            } else {
                transport(&family, &mu, tau)?
            };
            let mut exps = vec![Rational::zero(); ring.vars().len()];
            for (k, m) in mu.multiplicities().iter().enumerate().skip(1) {
                exps[ring.var_index(&p_name(k as u32)).unwrap()] = int(i64::from(*m));
            }
            let pm = Series::monomial(ring, &exps, CycloNum::one(ring.field()))?;
            out = out.add(&r.substitute(&[], ring)?.mul(&pm)?)?;
        }
    }
    Ok(out)
}

/// Finite abelian group `prod Z_{n_j}` with a character `g -> exp(2 pi i sum phi_j g_j / n_j)`.
#[derive(Clone, Debug, Serialize)]
pub struct AbelianData {
    pub orders: Vec<u32>,
    pub character: Vec<u32>,
}

impl AbelianData {
    pub fn group_order(&self) -> u64 {
        self.orders.iter().map(|&n| u64::from(n)).product()
    }

    /// Order `a` of the image of the character.
    pub fn image_order(&self) -> u32 {
        self.orders
            .iter()
            .zip(&self.character)
            .map(|(&n, &f)| n / num_integer::gcd(f % n, n).max(if f % n == 0 { n } else { 1 }))
            .fold(1, num_integer::lcm)
    }

    /// Image of a group element in `Z_a`.
    pub fn project(&self, g: &[u32]) -> Result<u32> {
        if g.len() != self.orders.len() {
            return Err(usage("group element has the wrong number of components"));
        }
        let a = u64::from(self.image_order());
        let mut k = 0u64;
        for ((&n, &f), &x) in self.orders.iter().zip(&self.character).zip(g) {
            // f a / n is integral because n / gcd(f, n) divides a
            k += u64::from(f) * a / u64::from(n) * u64::from(x % n);
        }
        Ok((k % a) as u32)
    }
}

/// Both sides of the abelian lift for one monodromy vector.
#[derive(Clone, Debug)]
pub struct AbelianLift {
    pub a: u32,
    pub kernel_order: u64,
    pub gamma: ColorVector,
    /// `R_{phi(gamma)}(lambda; tau; p)_a`, a series in `(lambda, p)`.
    pub base: Series,
    /// `|K| R_{phi(gamma)}(|K| lambda; tau; p/|K|)_a`.
    pub lifted: Series,
}

pub fn abelian_lift(
    group: &AbelianData,
    gamma_g: &[Vec<u32>],
    tau: i64,
    d_max: u32,
    lambda_max: i64,
) -> Result<AbelianLift> {
    if group.orders.len() != group.character.len() || group.orders.contains(&0) {
        return Err(usage("character must have one component per cyclic factor"));
    }
    let a = group.image_order();
    let k = group.group_order() / u64::from(a);
    let mut entries = Vec::with_capacity(gamma_g.len());
    for g in gamma_g {
        let e = group.project(g)?;
        if e == 0 {
            return Err(Error::Domain(format!("monodromy {g:?} maps to the trivial element of Z_{a}")));
        }
        entries.push(e);
    }
    let gamma = ColorVector::new(a, entries)?;
    let x_deg = gamma.len() as i64;
    let d = i64::from(d_max);
    let ring = gw_ring(a, d_max, (-d - 1, lambda_max + d + 3), x_deg)?;
    let connected = r_bullet_generating(a, d_max, tau, x_deg, &ring)?.log()?;
    let p_ring = gw_ring(a, d_max, (-d, lambda_max), 0)?;
    let fixed: Vec<(String, Rational)> =
        gamma.x_exponents().iter().enumerate().map(|(i, &e)| (x_name(i as u32 + 1), int(e))).collect();
    let f: Vec<(&str, Rational)> = fixed.iter().map(|(n, r)| (n.as_str(), r.clone())).collect();
    let base = connected.extract(&f, &p_ring)?;
    let kk = int(k as i64);
    let mut bindings = vec![("lambda", Series::var(&p_ring, "lambda")?.scale_rational(&kk))];
    let names: Vec<String> = (1..=d_max).map(p_name).collect();
    for n in &names {
        bindings.push((n.as_str(), Series::var(&p_ring, n)?.scale_rational(&(Rational::one() / &kk))));
    }
    let lifted = base.substitute(&bindings, &p_ring)?.scale_rational(&kk);
    Ok(AbelianLift { a, kernel_order: k, gamma, base, lifted })
}

/// Checks `[lambda^e p_mu]` of the lifted series against `|K|^{1 + e - l(mu)}`
/// times the base coefficient, for each monodromy vector and framing.
pub fn abelian_check(
    group: &AbelianData,
    gammas: &[Vec<Vec<u32>>],
    taus: &[i64],
    d_max: u32,
    lambda_max: i64,
) -> Result<Report> {
    let mut report = Report::new(format!("abelian orders={:?} character={:?}", group.orders, group.character));
    for gamma_g in gammas {
        for &tau in taus {
            let lift = abelian_lift(group, gamma_g, tau, d_max, lambda_max)?;
            let ring = lift.base.ring().clone();
            let k = int(lift.kernel_order as i64);
            report.check(!lift.base.is_empty(), || format!("gamma={gamma_g:?} tau={tau}: empty base series"));
            for (e, c) in lift.base.terms() {
                let ex = ring.exponents(e);
                let lam = ex[0].clone();
                let len: Rational = ex[1..].iter().sum();
                let power = (lam.clone() + int(1) - len).to_integer();
                let power = i32::try_from(power).map_err(|_| usage("exponent out of range"))?;
                let scale = num_traits::pow::Pow::pow(&k, power);
                let want = c.scale(&scale);
                let got = lift.lifted.coefficient(&ex)?;
                report.check(got == want, || format!("gamma={gamma_g:?} tau={tau} at {ex:?}: {got} != {want}"));
            }
            for (e, _) in lift.lifted.terms() {
                let ex = ring.exponents(e);
                report.check(!lift.base.coefficient(&ex)?.is_zero(), || {
                    format!("gamma={gamma_g:?} tau={tau}: stray term at {ex:?}")
                });
            }
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

    fn lam_ring(lo: i64, hi: i64) -> Arc<Ring> {
        lambda_ring(1, (lo, hi), 0).unwrap()
    }

    fn half_csc(ring: &Arc<Ring>) -> Series {
        Series::sin_linear(ring, "lambda", &rat(1, 2)).unwrap().scale_rational(&int(2)).invert().unwrap()
    }

    #[test]
    fn caps() {
        let r = lam_ring(-1, 8);
        let c = cap_closed_form(1, 1, &ColorVector::empty(1), &r).unwrap();
        let win = lam_ring(-1, 5);
        assert!(c.series.first_difference(&half_csc(&r), &win).unwrap().is_none());
        assert!(c.series.coeff_of(&[("lambda", int(-1))]).unwrap().is_one());
        assert_eq!(c.series.coeff_of(&[("lambda", int(1))]).unwrap().as_rational().unwrap(), &rat(1, 24));
        let r2 = lambda_ring(2, (-1, 8), 2).unwrap();
        let c2 = cap_closed_form(2, 1, &ColorVector::new(2, vec![1]).unwrap(), &r2).unwrap();
        assert_eq!(c2.series.coeff_of(&[("lambda", int(-1))]).unwrap(), CycloNum::one(r2.field()));
        assert!(cap_closed_form(2, 1, &ColorVector::empty(2), &r2).unwrap().series.is_zero());
        // odd exponents only
        for (e, _) in c.series.terms() {
            assert_eq!(e[0].rem_euclid(2), 1);
        }
    }

    #[test]
    fn assembled_coefficients() {
        let r = gw_ring(2, 2, (-2, 4), 2).unwrap();
        let g = assemble_g0(2, 2, 2, &r).unwrap();
        let c = g.coeff_of(&[("lambda", int(-1)), ("p1", int(1)), ("x1", int(1))]).unwrap();
        assert!(c.is_one());
        // x-degree zero: only even d
        assert!(g.coeff_of(&[("lambda", int(-1)), ("p1", int(1))]).unwrap().is_zero());
        assert!(!g.coeff_of(&[("lambda", int(-1)), ("p2", int(1))]).unwrap().is_zero());
    }

    #[test]
    fn bullet_examples() {
        let one = g_bullet_mu(1, &p(&[1]), 0, 5).unwrap();
        let r = lam_ring(-1, 8);
        assert!(one.first_difference(&half_csc(&r), &lam_ring(-1, 5)).unwrap().is_none());
        let two = g_bullet_mu(1, &p(&[1, 1]), 0, 4).unwrap();
        assert_eq!(two.coeff_of(&[("lambda", int(-2))]).unwrap().as_rational().unwrap(), &rat(1, 2));
    }

    #[test]
    fn quantum_dimensions_agree() {
        let r = lam_ring(-8, 22);
        let win = lam_ring(-5, 6);
        assert!(quantum_dim_sine(&Partition::empty(), &r)
            .unwrap()
            .first_difference(&Series::one(&r), &win)
            .unwrap()
            .is_none());
        for d in 1..=3 {
            for nu in partitions_of(d) {
                let s = quantum_dim_sine(&nu, &r).unwrap();
                let h = quantum_dim_hook(&nu, &r).unwrap();
                assert!(s.first_difference(&h, &win).unwrap().is_none(), "{nu}");
            }
        }
        let v1 = quantum_dim_sine(&p(&[1]), &r).unwrap();
        assert!(v1.first_difference(&half_csc(&r), &win).unwrap().is_none());
    }

    #[test]
    fn pinned_branch_at_degree_one() {
        let r = r_bullet_zero(1, &p(&[1]), 0, 5).unwrap();
        let g = g_bullet_mu(1, &p(&[1]), 0, 5).unwrap();
        assert!(r.first_difference(&g, &lam_ring(-1, 5)).unwrap().is_none());
        let empty = r_bullet_zero(2, &Partition::empty(), 2, 3).unwrap();
        assert!(empty.coeff_of(&[]).unwrap().is_one());
        assert_eq!(empty.len(), 1);
    }

    #[test]
    fn framing_one_keeps_the_pole() {
        let f = r_bullet_tau(1, &p(&[1]), 1, 0, 4).unwrap();
        assert!(f.series.coeff_of(&[("lambda", int(-1))]).unwrap().is_one());
        let z = r_bullet_tau(2, &p(&[2]), 0, 2, 3).unwrap();
        let r0 = r_bullet_zero(2, &p(&[2]), 2, 3).unwrap();
        assert!(z.series.first_difference(&r0, &lambda_ring(2, (-2, 3), 2).unwrap()).unwrap().is_none());
    }

    #[test]
    fn mv_small() {
        assert!(mv_a1_check(&p(&[1]), 6).unwrap().passed);
        assert!(mv_a1_check(&p(&[2]), 6).unwrap().passed);
    }

    #[test]
    fn lift_scaling_z4() {
        let z4 = AbelianData { orders: vec![4], character: vec![2] };
        let r = abelian_check(&z4, &[vec![vec![1]], vec![vec![1], vec![3]]], &[0, 1], 2, 2).unwrap();
        assert!(r.passed, "{:?}", r.first_failure);
        assert!(r.checked > 4);
    }

    #[test]
    fn character_image() {
        let z4 = AbelianData { orders: vec![4], character: vec![2] };
        assert_eq!(z4.image_order(), 2);
        assert_eq!(z4.project(&[1]).unwrap(), 1);
        assert_eq!(z4.project(&[2]).unwrap(), 0);
        let v4 = AbelianData { orders: vec![2, 2], character: vec![1, 0] };
        assert_eq!(v4.image_order(), 2);
        assert_eq!(v4.project(&[1, 1]).unwrap(), 1);
        assert_eq!(v4.project(&[0, 1]).unwrap(), 0);
        let triv = AbelianData { orders: vec![3], character: vec![0] };
        assert_eq!(triv.image_order(), 1);
    }
}
