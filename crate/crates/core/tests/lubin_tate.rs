use std::time::Instant;

use closefield_core::localfield::{FieldDesc, PField, PNum, TruncRing};
use closefield_core::lubin_tate::{lt_log, torsion_tower, FormalGroup, Source};
use closefield_core::series::SeriesRing;
use closefield_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn qp(p: u32) -> FieldDesc {
    FieldDesc::qp_root(p, 1).unwrap()
}

/// Power series with rational coefficients, truncated at degree `d`.
fn rmul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let d = a.len();
    let mut out = vec![BigRational::zero(); d];
    for i in 0..d {
        for j in 0..d - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

/// Compositional inverse by Lagrange inversion: `b_n = [X^{n−1}] (X/f)^n / n`.
fn lagrange_inverse(f: &[BigRational]) -> Vec<BigRational> {
    let d = f.len() - 1;
    // X/f = 1/(f_1 + f_2 X + …)
    let shifted: Vec<BigRational> = (0..d).map(|k| f[k + 1].clone()).collect();
    let mut inv = vec![BigRational::zero(); d];
    inv[0] = shifted[0].recip();
    for k in 1..d {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            acc += &shifted[i] * &inv[k - i];
        }
        inv[k] = -(&inv[0] * acc);
    }
    let mut out = vec![BigRational::zero(); d + 1];
    let mut power = vec![BigRational::zero(); d];
    power[0] = BigRational::one();
    for n in 1..=d {
        power = rmul(&power, &inv);
        out[n] = &power[n - 1] / BigRational::from_integer(BigInt::from(n));
    }
    out
}

fn val_p(mut v: BigInt, p: &BigInt) -> i64 {
    let mut k = 0;
    while (&v % p).is_zero() {
        v /= p;
        k += 1;
    }
    k
}

/// Whether a number of `Q_p` (with `π = p`) agrees with a rational to all its known digits.
fn agrees(pf: &PField, a: &PNum, r: &BigRational, p: u32) -> bool {
    let pb = BigInt::from(p);
    if r.is_zero() {
        return pf.is_exact_zero(a) || pf.valuation(a).is_none();
    }
    let (_, digits) = pf.parts(a);
    let v = val_p(r.numer().clone(), &pb) - val_p(r.denom().clone(), &pb);
    if pf.valuation(a) != Some(v) {
        return false;
    }
    let modulus = pb.pow(digits.len() as u32);
    let unit = r * BigRational::from_integer(pb.clone()).pow(-v as i32);
    let num = unit.numer().clone();
    let den_inv = unit.denom().modinv(&modulus).unwrap();
    let expected = ((num * den_inv) % &modulus + &modulus) % &modulus;
    // digits are Teichmüller digits
    let teich = |d: u32| BigInt::from(d).modpow(&pb.pow(digits.len() as u32), &modulus);
    let ours = digits.iter().rev().fold(BigInt::zero(), |acc, &d| (acc * &pb + teich(d)) % &modulus);
    expected == ours
}

#[test]
fn logarithm_closed_form() {
    let pf = PField::new(&qp(2), 12).unwrap();
    let s1 = SeriesRing::new(pf.clone(), 1, 4).unwrap();
    let log = lt_log(&s1);
    assert_eq!(log.coeff(&[1]), Some(&pf.one()));
    assert_eq!(log.coeff(&[2]), Some(&pf.pi_pow(-1)));
    assert!(pf.is_exact_zero(log.coeff(&[3]).unwrap()));
    assert_eq!(log.coeff(&[4]), Some(&pf.pi_pow(-2)));

    let s1 = SeriesRing::new(pf.clone(), 1, 1).unwrap();
    assert_eq!(lt_log(&s1), s1.var(0));

    let pf3 = PField::new(&qp(3), 12).unwrap();
    let s3 = SeriesRing::new(pf3.clone(), 1, 9).unwrap();
    let log = lt_log(&s3);
    let nonzero: Vec<usize> = (0..=9).filter(|&k| !pf3.is_exact_zero(log.coeff(&[k as u16]).unwrap())).collect();
    assert_eq!(nonzero, vec![1, 3, 9]);
    assert_eq!(log.coeff(&[9]), Some(&pf3.pi_pow(-2)));
}

#[test]
fn exponential_matches_lagrange_inversion() {
    for (p, degree) in [(2u32, 3usize), (2, 8), (3, 9)] {
        let group = FormalGroup::canonical(&qp(p), degree, 4).unwrap();
        let pf = group.pfield();
        let mut log = vec![BigRational::zero(); degree + 1];
        let mut k = 1usize;
        let mut r = 0u32;
        while k <= degree {
            log[k] = BigRational::new(BigInt::one(), BigInt::from(p).pow(r));
            k *= p as usize;
            r += 1;
        }
        let exp = lagrange_inverse(&log);
        for (k, coeff) in exp.iter().enumerate() {
            let ours = group.exp().coeff(&[k as u16]).unwrap();
            assert!(agrees(pf, ours, coeff, p), "p={p} X^{k}: {} vs {coeff}", pf.format(ours));
        }
        if degree == 3 {
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            assert_eq!(exp[2], -half.clone());
            assert_eq!(exp[3], half);
        }
    }
    let group = FormalGroup::canonical(&qp(2), 1, 4).unwrap();
    assert_eq!(group.exp(), &group.series().var(0));
}

#[test]
fn exponential_coefficients_are_bounded() {
    for p in [2u32, 3] {
        let group = FormalGroup::canonical(&qp(p), 3 * p as usize * p as usize, 4).unwrap();
        let pf = group.pfield();
        let q = p as i64;
        for (k, c) in group.exp().coeffs().iter().enumerate().skip(1) {
            if let Some(v) = pf.valuation(c) {
                assert!(v >= -((k as i64 - 1) / (q - 1)), "p={p} k={k} v={v}");
            }
        }
    }
}

fn sqrt2() -> FieldDesc {
    FieldDesc::qp_root(2, 2).unwrap()
}

#[test]
fn identities_at_cube_cutoff() {
    for field in [qp(2), qp(3), sqrt2()] {
        let q = field.q() as usize;
        for canonical in [true, false] {
            let start = Instant::now();
            let group = if canonical {
                FormalGroup::canonical(&field, q * q * q, 4).unwrap()
            } else {
                FormalGroup::classical_default(&field, q * q * q, 4).unwrap()
            };
            let report = group.check_identities(true).unwrap();
            assert!(report.ok(), "{field} canonical={canonical}: {:?}", report.failed());
            assert!(start.elapsed().as_secs() < 30);
        }
    }
}

#[test]
fn classical_endomorphism_is_the_given_series() {
    let field = qp(3);
    let group = FormalGroup::classical_default(&field, 12, 4).unwrap();
    assert_eq!(group.source(), &Source::Classical);
    let (f, exact) = group.torsion_series().unwrap();
    assert!(exact);
    assert_eq!(group.f_pi().unwrap(), f);
    let int = group.integral_ring();
    assert_eq!(f.coeff(&[1]), Some(&int.from_int(3)));
    assert_eq!(f.coeff(&[3]), Some(&int.one()));
}

#[test]
fn canonical_f_pi_for_z2() {
    let group = FormalGroup::canonical(&qp(2), 8, 4).unwrap();
    let f = group.f_pi().unwrap();
    let int = group.integral_ring();
    assert_eq!(f.coeff(&[1]), Some(&int.from_int(2)));
    assert!(int.is_unit(f.coeff(&[2]).unwrap()));
    let law = group.group_law().unwrap();
    assert_eq!(law.coeff(&[1, 0]), Some(&int.one()));
    assert_eq!(law.coeff(&[0, 1]), Some(&int.one()));
    assert_eq!(law.coeff(&[2, 0]), Some(&int.zero()));
}

#[test]
fn invalid_classical_series_is_rejected() {
    let field = qp(2);
    let wrong_linear = [(1, vec![0, 0, 1]), (2, vec![1])];
    assert!(matches!(FormalGroup::classical(&field, 8, 4, &wrong_linear), Err(Error::Invalid(_))));
    let wrong_mod_pi = [(1, vec![0, 1]), (2, vec![1]), (3, vec![1])];
    assert!(matches!(FormalGroup::classical(&field, 8, 4, &wrong_mod_pi), Err(Error::Invalid(_))));
    let beyond = [(1, vec![0, 1]), (2, vec![1])];
    assert!(matches!(FormalGroup::classical(&field, 1, 4, &beyond), Err(Error::Precision(_))));
}

fn digits(ring: &TruncRing, a: &[closefield_core::localfield::El]) -> Vec<Vec<u32>> {
    a.iter().map(|c| ring.digits(c)).collect()
}

#[test]
fn tower_for_two_x_plus_x_squared() {
    let group = FormalGroup::classical_default(&qp(2), 8, 4).unwrap();
    let tower = torsion_tower(&group, 2).unwrap();
    let ring = tower.ring();
    let base = ring.base();
    // g_1 = X + 2
    let g1 = tower.stage_polynomial(1);
    assert_eq!(g1.len(), 1);
    assert_eq!(g1[0], vec![base.from_int(2)]);
    // g_2 = X^2 + 2X + 2 over stage 1 = O, where t_1 = −2
    let g2 = tower.stage_polynomial(2);
    assert_eq!(g2, &[vec![base.from_int(2)], vec![base.from_int(2)]]);
    assert_eq!(digits(base, tower.torsion_polynomial(2)), digits(base, &[base.from_int(2), base.from_int(2), base.one()]));
    let report = tower.check().unwrap();
    assert!(report.ok(), "{:?}", report.failed());
    assert_eq!(report.torsion_count, 4);
}

#[test]
fn limit_coordinates_by_hand() {
    let group = FormalGroup::classical_default(&qp(2), 8, 4).unwrap();
    let tower = torsion_tower(&group, 2).unwrap();
    let ring = tower.ring();
    let (t1, t2) = (ring.gen(1), ring.gen(2));
    // t_2^2 = t_1 − 2 t_2, so t_2^4 − t_1^2 = 4 t_2^2 − 4 t_1 t_2
    let lhs = ring.sub(&ring.pow(&t2, 4), &ring.pow(&t1, 2));
    let four = ring.base().from_int(4);
    let rhs = ring.sub(&ring.scale_base(&four, &ring.pow(&t2, 2)), &ring.scale_base(&four, &ring.mul(&t1, &t2)));
    assert_eq!(lhs, rhs);
    assert_eq!(tower.limit_coordinate_check().unwrap(), vec![(1, true)]);

    let shallow = torsion_tower(&group, 1).unwrap();
    assert!(shallow.limit_coordinate_check().unwrap().is_empty());
}

#[test]
fn towers_at_depth_two() {
    for (p, canonical) in [(2u32, false), (3, false), (2, true), (3, true)] {
        let start = Instant::now();
        let field = qp(p);
        let q = p as usize;
        let group = if canonical {
            FormalGroup::canonical(&field, q * q * q, 4).unwrap()
        } else {
            FormalGroup::classical_default(&field, q * q * q, 4).unwrap()
        };
        match torsion_tower(&group, 2) {
            Ok(tower) => {
                let report = tower.check().unwrap();
                assert!(report.ok(), "p={p} canonical={canonical}: {:?}", report.failed());
                assert_eq!(report.torsion_degrees, vec![q - 1, q * (q - 1)]);
                assert_eq!(report.stage_degrees, vec![q - 1, q]);
                assert_eq!(report.torsion_count, q * q);
            }
            Err(Error::Precision(msg)) => assert!(canonical, "p={p}: {msg}"),
            Err(e) => panic!("p={p} canonical={canonical}: {e}"),
        }
        assert!(start.elapsed().as_secs() < 10);
    }
}

#[test]
fn ramified_tower() {
    let group = FormalGroup::classical_default(&sqrt2(), 8, 4).unwrap();
    let tower = torsion_tower(&group, 2).unwrap();
    let report = tower.check().unwrap();
    assert!(report.ok(), "{:?}", report.failed());
}

#[test]
fn unit_action_examples() {
    let group = FormalGroup::classical_default(&qp(2), 8, 4).unwrap();
    let tower = torsion_tower(&group, 1).unwrap();
    let base = tower.ring().base().clone();
    let report = tower.unit_action_check(&base.from_int(-1)).unwrap();
    assert!(report.permutes_torsion && report.fixes_generator && report.ok());
    assert!(matches!(tower.unit_action_check(&base.from_int(2)), Err(Error::NotUnit)));

    let group = FormalGroup::classical_default(&qp(3), 12, 4).unwrap();
    let tower = torsion_tower(&group, 1).unwrap();
    let ring = tower.ring();
    let base = ring.base().clone();
    // g_1 = X^2 + 3
    assert_eq!(tower.stage_polynomial(1), &[vec![base.from_int(3)], vec![base.zero()]]);
    let image = tower.unit_image(&base.from_int(2)).unwrap();
    assert_eq!(image, ring.neg(&ring.gen(1)));
    let report = tower.unit_action_check(&base.from_int(2)).unwrap();
    assert!(report.ok() && !report.fixes_generator);
    let four = tower.unit_image(&base.from_int(4)).unwrap();
    assert_eq!(four, ring.gen(1));
    let one = tower.unit_action_check(&base.one()).unwrap();
    assert!(one.ok() && one.fixes_generator);
}

#[test]
fn unit_action_at_depth_two_over_z3() {
    let group = FormalGroup::classical_default(&qp(3), 27, 4).unwrap();
    let tower = torsion_tower(&group, 2).unwrap();
    let base = tower.ring().base().clone();
    let mut fixed = 0;
    for u in base.elements().filter(|u| base.is_unit(u)) {
        let report = tower.unit_action_check(&u).unwrap();
        assert!(report.ok(), "{:?}", report);
        fixed += report.fixes_generator as usize;
    }
    // units ≡ 1 mod 9 in (Z/81)^×
    assert_eq!(fixed, 9);
}

fn small_group(p: u32) -> FormalGroup {
    FormalGroup::canonical(&qp(p), 8, 3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn endomorphisms_compose(p in prop::sample::select(vec![2u32, 3]), a in 0i64..1000, b in 0i64..1000) {
        let group = small_group(p);
        let pf = group.pfield();
        let (x, y) = (pf.from_int(a), pf.from_int(b));
        let i1 = group.integral_series();
        let composed = i1.compose1(&group.mult(&x).unwrap(), &group.mult(&y).unwrap()).unwrap();
        prop_assert_eq!(composed, group.mult(&pf.mul(&x, &y)).unwrap());
    }

    #[test]
    fn endomorphisms_are_integral_and_congruent(p in prop::sample::select(vec![2u32, 3]), a in -500i64..500) {
        let group = small_group(p);
        let int = group.integral_ring();
        let series = group.mult(&group.pfield().from_int(a)).unwrap();
        // [a](X) = aX + higher terms
        prop_assert_eq!(series.coeff(&[1]), Some(&int.from_int(a)));
        prop_assert!(int.is_zero(series.coeff(&[0]).unwrap()));
    }

    #[test]
    fn units_permute_torsion(u in 1i64..81) {
        prop_assume!(u % 3 != 0);
        let group = FormalGroup::classical_default(&qp(3), 12, 4).unwrap();
        let tower = torsion_tower(&group, 1).unwrap();
        let base = tower.ring().base().clone();
        let report = tower.unit_action_check(&base.from_int(u)).unwrap();
        prop_assert!(report.ok());
        prop_assert_eq!(report.fixes_generator, u % 3 == 1);
    }
}

#[test]
fn classical_logarithm_is_the_iterate_limit() {
    for p in [2u32, 3] {
        let group = FormalGroup::classical_default(&qp(p), 9, 3).unwrap();
        let pf = group.pfield();
        let s1 = group.series();
        let approx = group.limit_approximant(12).unwrap();
        let diff = s1.sub(&approx, group.log());
        for c in diff.coeffs() {
            assert!(pf.val_bound(c).is_none_or(|v| v >= 3), "p={p}: {}", pf.format(c));
        }
    }
}

#[test]
fn oracle_sanity() {
    let r = BigRational::new(BigInt::from(-3), BigInt::from(4));
    let pf = PField::new(&qp(2), 8).unwrap();
    let a = pf.mul(&pf.from_int(-3), &pf.pi_pow(-2));
    assert!(agrees(&pf, &a, &r, 2));
    assert!(!agrees(&pf, &pf.from_int(3), &r, 2));
    assert!(r.is_negative() && r.to_f64().unwrap() < 0.0);
}

#[test]
fn canonical_tower_over_z2() {
    let group = FormalGroup::canonical(&qp(2), 16, 3).unwrap();
    let tower = torsion_tower(&group, 2).unwrap();
    let report = tower.check().unwrap();
    assert!(report.ok(), "{:?}", report.failed());
    let base = tower.ring().base().clone();
    for u in base.elements().filter(|u| base.is_unit(u)) {
        assert!(tower.unit_action_check(&u).unwrap().ok());
    }
}
