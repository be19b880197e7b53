use std::sync::Arc;

use num_traits::Zero;
use orbivertex::characters::chi;
use orbivertex::exactnum::{int, rat, CycloField, CycloNum, Rational};
use orbivertex::hurwitz::phi;
use orbivertex::localgw::{block_difference, cap_block, glue, identity_block, tube_block};
use orbivertex::partitions::{partitions_of, Partition};
use orbivertex::series::{Ring, Series, VarSpec};
use proptest::prelude::*;

fn partition_of(max_d: u32) -> impl Strategy<Value = Partition> {
    (1..=max_d).prop_flat_map(|d| {
        let all = partitions_of(d);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

fn pair_of_size(max_d: u32) -> impl Strategy<Value = (Partition, Partition)> {
    (1..=max_d).prop_flat_map(|d| {
        let all = partitions_of(d);
        let n = all.len();
        (0..n, 0..n).prop_map(move |(i, j)| (all[i].clone(), all[j].clone()))
    })
}

fn sign(mu: &Partition) -> i64 {
    if (mu.size() as usize - mu.len()).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn field12() -> Arc<CycloField> {
    CycloField::new(12)
}

fn cyclo(field: Arc<CycloField>) -> impl Strategy<Value = CycloNum> {
    let deg = field.degree();
    prop::collection::vec((-6i64..=6, 1i64..=4), deg)
        .prop_map(move |cs| CycloNum::from_coeffs(&field, cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
}

fn ring() -> Arc<Ring> {
    let field = CycloField::new(4);
    Ring::builder(&field).var(VarSpec::integer("lambda", 0, 6)).grade("lambda", 1).build().unwrap()
}

fn poly(min_exp: i64) -> impl Strategy<Value = Series> {
    prop::collection::vec(-5i64..=5, 7).prop_map(move |cs| {
        let r = ring();
        let mut s = Series::zero(&r);
        for (k, c) in cs.into_iter().enumerate() {
            let k = k as i64;
            if k >= min_exp && c != 0 {
                let t = Series::var_power(&r, "lambda", &int(k), CycloNum::from_int(r.field(), c)).unwrap();
                s = s.add(&t).unwrap();
            }
        }
        s
    })
}

fn same(x: &Series, y: &Series) -> bool {
    x.first_difference(y, &ring()).unwrap().is_none()
}

proptest! {
    #[test]
    fn field_laws(x in cyclo(field12()), y in cyclo(field12()), z in cyclo(field12())) {
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn embedding_is_multiplicative(x in cyclo(CycloField::new(4)), y in cyclo(CycloField::new(4))) {
        let big = CycloField::new(12);
        let lhs = (&x * &y).embed(&big).unwrap();
        let rhs = &x.embed(&big).unwrap() * &y.embed(&big).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kappa_flips_under_conjugation(nu in partition_of(9)) {
        prop_assert_eq!(nu.conjugate().kappa(), -nu.kappa());
        prop_assert_eq!(nu.conjugate().conjugate(), nu);
    }

    #[test]
    fn hook_length_gives_dimension(nu in partition_of(7)) {
        let d = nu.size();
        let fact: u64 = (1..=u64::from(d)).product();
        let hooks: u64 = nu.hooks().iter().map(|&h| u64::from(h)).product();
        let ones = Partition::new(vec![1; d as usize]);
        prop_assert_eq!(chi(&nu, &ones).unwrap(), (fact / hooks) as i64);
    }

    #[test]
    fn conjugate_character_twists_by_sign((nu, mu) in pair_of_size(7)) {
        prop_assert_eq!(chi(&nu.conjugate(), &mu).unwrap(), sign(&mu) * chi(&nu, &mu).unwrap());
    }

    #[test]
    fn phi_symmetry_and_parity((nu, mu) in pair_of_size(5), r in 0u32..6) {
        let a = phi(&nu, &mu).unwrap().coefficient(r);
        let b = phi(&mu, &nu).unwrap().coefficient(r);
        prop_assert_eq!(&a, &b);
        let parity = if r % 2 == 0 { 1 } else { -1 };
        if parity * sign(&nu) * sign(&mu) == -1 {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn series_ring_laws(f in poly(0), g in poly(0), h in poly(0)) {
        prop_assert!(same(&f.mul(&g).unwrap(), &g.mul(&f).unwrap()));
        let lhs = f.mul(&g.add(&h).unwrap()).unwrap();
        let rhs = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        prop_assert!(same(&lhs, &rhs));
        prop_assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn exp_log_round_trip(f in poly(1)) {
        let one_plus = Series::one(&ring()).add(&f).unwrap();
        prop_assert!(same(&one_plus.log().unwrap().exp().unwrap(), &one_plus));
        prop_assert!(same(&one_plus.mul(&one_plus.invert().unwrap()).unwrap(), &Series::one(&ring())));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn gluing_identity_and_zero_tube(a in 1u32..=2, d in 1u32..=2) {
        let cap = cap_block(a, d, 4, 0).unwrap();
        let glued = glue(&cap, 0, &identity_block(d).unwrap(), 0).unwrap();
        prop_assert_eq!(block_difference(&glued, &cap, 2).unwrap(), None);
        let framed = glue(&cap, 0, &tube_block(d, 0, 6).unwrap(), 0).unwrap();
        prop_assert_eq!(block_difference(&framed, &cap, 2).unwrap(), None);
    }
}

#[test]
fn class_sizes_sum_to_one() {
    for d in 1..=8 {
        let total: Rational = partitions_of(d).iter().map(|mu| rat(1, mu.z() as i64)).sum();
        assert_eq!(total, int(1));
    }
}
