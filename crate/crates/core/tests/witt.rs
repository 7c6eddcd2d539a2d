use std::collections::HashMap;

use closefield_core::fq::ResidueField;
use closefield_core::localfield::FieldDesc;
use closefield_core::witt::*;
use closefield_core::Error;
use proptest::prelude::*;

fn z2() -> FieldDesc {
    FieldDesc::qp_root(2, 1).unwrap()
}

#[test]
fn specialization_to_classical_laws() {
    for (p, n) in [(2, 1), (2, 3), (3, 2), (3, 3)] {
        let t = law_polynomials(&FieldDesc::qp_root(p, 1).unwrap(), n, 4).unwrap();
        let rep = specialize_check(&t).unwrap();
        assert!(rep.matched(), "{rep:?}");
        assert!(rep.monomials_compared > 0);
    }
    let t = law_polynomials(&FieldDesc::qp_root(2, 2).unwrap(), 2, 4).unwrap();
    assert!(matches!(specialize_check(&t), Err(Error::InvalidField(_))));
}

#[test]
fn ramified_laws_are_consistent() {
    let t = law_polynomials(&FieldDesc::qp_root(2, 2).unwrap(), 3, 4).unwrap();
    t.check_ghost_consistency().unwrap();
    let json = serde_json::to_value(t.to_json()).unwrap();
    assert_eq!(json["sum"].as_array().unwrap().len(), 3);
}

type Tables<E> = (Vec<Vec<E>>, HashMap<Vec<E>, usize>, Vec<Vec<usize>>, Vec<Vec<usize>>);

fn tables<A: WittAlgebra>(w: &WittRing<A>) -> Tables<A::Elem> {
    let all = w.elements();
    let idx: HashMap<Vec<A::Elem>, usize> = all.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let add = all.iter().map(|x| all.iter().map(|y| idx[&w.add(x, y).unwrap()]).collect()).collect();
    let mul = all.iter().map(|x| all.iter().map(|y| idx[&w.mul(x, y).unwrap()]).collect()).collect();
    (all, idx, add, mul)
}

fn ring_axioms<A: WittAlgebra>(w: &WittRing<A>) {
    let (all, idx, add, mul) = tables(w);
    let (zero, one) = (idx[&w.zero()], idx[&w.one()]);
    let n = all.len();
    for a in 0..n {
        assert_eq!(add[a][zero], a);
        assert_eq!(mul[a][one], a);
        assert_eq!(add[a][idx[&w.neg(&all[a]).unwrap()]], zero);
        for b in 0..n {
            assert_eq!(add[a][b], add[b][a]);
            assert_eq!(mul[a][b], mul[b][a]);
            for c in 0..n {
                assert_eq!(add[add[a][b]][c], add[a][add[b][c]]);
                assert_eq!(mul[mul[a][b]][c], mul[a][mul[b][c]]);
                assert_eq!(mul[a][add[b][c]], add[mul[a][b]][mul[a][c]]);
            }
        }
    }
}

#[test]
fn exhaustive_ring_axioms() {
    for (field, n) in [(z2(), 3), (FieldDesc::qp_root(3, 1).unwrap(), 3), (FieldDesc::unramified(2, 2).unwrap(), 3), (FieldDesc::qp_root(2, 2).unwrap(), 3)] {
        let t = law_polynomials(&field, n, 1).unwrap();
        let w = WittRing::new(&t, FiniteField(field.residue().clone())).unwrap();
        ring_axioms(&w);
    }
}

#[test]
fn theta_isomorphisms() {
    for (field, max) in [(z2(), 9), (FieldDesc::qp_root(3, 1).unwrap(), 5), (FieldDesc::qp_root(2, 2).unwrap(), 9), (FieldDesc::unramified(2, 2).unwrap(), 4), (FieldDesc::laurent_series(2, 1).unwrap(), 9)] {
        for n in 1..=max {
            let rep = verify_theta(&field, n).unwrap();
            assert!(rep.ok() && rep.exhaustive, "{rep:?}");
        }
    }
}

#[test]
fn theta_sampled_beyond_exhaustive_range() {
    let rep = verify_theta(&z2(), 12).unwrap();
    assert!(rep.ok() && !rep.exhaustive);
}

#[test]
fn teichmuller_is_multiplicative_over_f4() {
    let field = FieldDesc::unramified(2, 2).unwrap();
    let t = law_polynomials(&field, 3, 1).unwrap();
    let a = FiniteField(field.residue().clone());
    let w = WittRing::new(&t, a.clone()).unwrap();
    for x in a.elements() {
        for y in a.elements() {
            assert_eq!(w.mul(&w.teichmuller(&x), &w.teichmuller(&y)).unwrap(), w.teichmuller(&a.mul(&x, &y)));
        }
    }
}

#[test]
fn frobenius_and_verschiebung() {
    for field in [z2(), FieldDesc::qp_root(3, 1).unwrap(), FieldDesc::unramified(2, 2).unwrap(), FieldDesc::qp_root(2, 2).unwrap()] {
        let t = law_polynomials(&field, 3, 1).unwrap();
        let w = WittRing::new(&t, FiniteField(field.residue().clone())).unwrap();
        for x in w.elements() {
            let pix = w.mul_pi(&x).unwrap();
            assert_eq!(w.frobenius(&w.verschiebung(&x).unwrap()).unwrap(), pix);
            assert_eq!(w.verschiebung(&w.frobenius(&x).unwrap()).unwrap(), pix);
        }
    }
}

#[test]
fn frobenius_needs_residue_algebra() {
    let t = law_polynomials(&z2(), 2, 3).unwrap();
    let w = WittRing::new(&t, Quotient(z2().ring(2).unwrap())).unwrap();
    assert!(w.frobenius(&w.one()).is_err());
    let t1 = law_polynomials(&z2(), 2, 1).unwrap();
    assert!(matches!(WittRing::new(&t1, Quotient(z2().ring(2).unwrap())), Err(Error::Precision(_))));
}

#[test]
fn truncated_algebras_are_rings() {
    let f2 = ResidueField::new(2, 1, None).unwrap();
    let t = law_polynomials(&z2(), 2, 1).unwrap();
    ring_axioms(&WittRing::new(&t, TruncPoly::new(f2.clone(), 2).unwrap()).unwrap());
    ring_axioms(&WittRing::new(&t, PerfectTrunc::new(f2, 1).unwrap()).unwrap());
}

#[test]
fn covector_shift() {
    let t = law_polynomials(&z2(), 3, 1).unwrap();
    let a = FiniteField(z2().residue().clone());
    let w = WittRing::new(&t, a.clone()).unwrap();
    let c = Covector::new(&a, vec![1, 1]);
    assert_eq!(c.shift(&a), Covector::new(&a, vec![1]));
    assert_eq!(c.entry(&a, 0), 1);
    assert_eq!(c.entry(&a, 5), 0);
    let z = Covector::new(&a, vec![]);
    assert_eq!(c.add(&w, &z).unwrap(), c);
}

fn field_strategy() -> impl Strategy<Value = FieldDesc> {
    prop_oneof![
        Just(FieldDesc::qp_root(2, 1).unwrap()),
        Just(FieldDesc::qp_root(3, 1).unwrap()),
        Just(FieldDesc::qp_root(2, 2).unwrap()),
        Just(FieldDesc::unramified(2, 2).unwrap()),
        Just(FieldDesc::laurent_series(3, 1).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ghost_round_trip(field in field_strategy(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let ring = field.ring(8).unwrap();
        let coords: Vec<_> = (0..3).map(|_| ring.random(&mut rng)).collect();
        let ghosts = ghost_map_num(&ring, &coords);
        let back = ghost_solve_num(&ring, &ghosts).unwrap();
        for (j, (a, b)) in coords.iter().zip(&back).enumerate() {
            prop_assert_eq!(ring.truncate(a, 8 - j as u32), ring.truncate(b, 8 - j as u32));
        }
    }

    #[test]
    fn ghost_map_is_a_ring_hom_on_quotients(field in field_strategy(), seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let t = law_polynomials(&field, 3, 3).unwrap();
        let a = Quotient(field.ring(3).unwrap());
        let w = WittRing::new(&t, a.clone()).unwrap();
        let x: Vec<_> = (0..3).map(|_| a.random(&mut rng)).collect();
        let y: Vec<_> = (0..3).map(|_| a.random(&mut rng)).collect();
        let r = &a.0;
        let (gx, gy) = (ghost_map_num(r, &x), ghost_map_num(r, &y));
        let gs = ghost_map_num(r, &w.add(&x, &y).unwrap());
        let gp = ghost_map_num(r, &w.mul(&x, &y).unwrap());
        let gn = ghost_map_num(r, &w.neg(&x).unwrap());
        for j in 0..3 {
            prop_assert_eq!(&gs[j], &r.add(&gx[j], &gy[j]));
            prop_assert_eq!(&gp[j], &r.mul(&gx[j], &gy[j]));
            prop_assert_eq!(&gn[j], &r.neg(&gx[j]));
        }
    }

    #[test]
    fn frobenius_is_a_ring_hom(seed in any::<u64>(), k in 1usize..4) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let field = FieldDesc::qp_root(3, 1).unwrap();
        let t = law_polynomials(&field, 3, 1).unwrap();
        let a = TruncPoly::new(field.residue().clone(), k).unwrap();
        let w = WittRing::new(&t, a.clone()).unwrap();
        let x: Vec<_> = (0..3).map(|_| a.random(&mut rng)).collect();
        let y: Vec<_> = (0..3).map(|_| a.random(&mut rng)).collect();
        let f = |v: &[Vec<u32>]| w.frobenius(v).unwrap();
        prop_assert_eq!(f(&w.add(&x, &y).unwrap()), w.add(&f(&x), &f(&y)).unwrap());
        prop_assert_eq!(f(&w.mul(&x, &y).unwrap()), w.mul(&f(&x), &f(&y)).unwrap());
        let v = |u: &[Vec<u32>]| w.verschiebung(u).unwrap();
        prop_assert_eq!(v(&w.add(&x, &y).unwrap()), w.add(&v(&x), &v(&y)).unwrap());
        prop_assert_eq!(f(&v(&x)), w.mul_pi(&x).unwrap());
        prop_assert_eq!(v(&f(&x)), w.mul_pi(&x).unwrap());
    }

    #[test]
    fn truncation_is_a_ring_hom(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let field = FieldDesc::qp_root(2, 2).unwrap();
        let t3 = law_polynomials(&field, 3, 1).unwrap();
        let a = TruncPoly::new(field.residue().clone(), 3).unwrap();
        let w3 = WittRing::new(&t3, a.clone()).unwrap();
        let w2 = WittRing::new(&t3.truncate(2).unwrap(), a.clone()).unwrap();
        let x: Vec<_> = (0..3).map(|_| a.random(&mut rng)).collect();
        let y: Vec<_> = (0..3).map(|_| a.random(&mut rng)).collect();
        let tr = |v: &[Vec<u32>]| w3.truncate(v, 2).unwrap();
        prop_assert_eq!(tr(&w3.add(&x, &y).unwrap()), w2.add(&tr(&x), &tr(&y)).unwrap());
        prop_assert_eq!(tr(&w3.mul(&x, &y).unwrap()), w2.mul(&tr(&x), &tr(&y)).unwrap());
    }
}
