use std::time::Instant;

use closefield_core::closefields::{
    eta_map, family_hecke, match_double_cosets, verify_algebra_iso, CloseFieldPair, SupportBound,
};
use closefield_core::hecke::{HeckeElem, DEFAULT_BUDGET};
use closefield_core::localfield::FieldDesc;
use closefield_core::Error;
use proptest::prelude::*;

fn q2() -> FieldDesc {
    FieldDesc::qp_root(2, 1).unwrap()
}
fn sqrt2() -> FieldDesc {
    FieldDesc::qp_root(2, 2).unwrap()
}
fn quartic() -> FieldDesc {
    FieldDesc::qp_root(2, 4).unwrap()
}
fn f2t() -> FieldDesc {
    FieldDesc::laurent_series(2, 1).unwrap()
}

/// Level-1 double cosets in `K∇(ν)K` for `GL_2`: `|GL_2(F_q)|` when `ν` is central,
/// `(q−1)²(q+1)²` otherwise (the stabilizer is a Borel times an opposite unipotent).
fn level_one_classes(q: usize, nu: &[i64]) -> usize {
    if nu[0] == nu[1] {
        (q * q - 1) * (q * q - q)
    } else {
        (q - 1) * (q - 1) * (q + 1) * (q + 1)
    }
}

#[test]
fn spherical_comparison() {
    let pair = CloseFieldPair::new(&q2(), &f2t(), 2, 0).unwrap();
    let report = verify_algebra_iso(&pair, &SupportBound::cube(2, 1), 2).unwrap();
    assert!(report.ok(), "{:?}", report.summary);
    let t = pair.lhs().nabla(&[1, 0]).unwrap();
    let square = report.instances.iter().find(|i| i.product == [t.clone(), t.clone()]).unwrap();
    let mut coeffs: Vec<i64> = square.lhs_terms.iter().map(|x| x.coeff).collect();
    coeffs.sort();
    assert_eq!(coeffs, vec![1, 3]);
    assert_eq!(square.lhs_terms, square.rhs_terms);
}

#[test]
fn level_one_comparisons() {
    for field in [sqrt2(), quartic()] {
        let start = Instant::now();
        let pair = CloseFieldPair::new(&field, &f2t(), 2, 1).unwrap();
        let bound = SupportBound::cube(2, 1);
        let matches = match_double_cosets(&pair, &bound).unwrap();
        for m in &matches {
            assert_eq!(m.lhs_count, level_one_classes(2, &m.nu), "{:?}", m.nu);
            assert_eq!(m.rhs_count, m.lhs_count);
        }
        let report = verify_algebra_iso(&pair, &bound, 2).unwrap();
        assert!(report.ok(), "{field}: {:?}", report.summary);
        assert_eq!(report.summary.generators, 45);
        assert_eq!(report.summary.products, 45 * 45);
        assert!(start.elapsed().as_secs() < 120);
    }
}

#[test]
fn torus_comparisons() {
    for (field, levels) in [(q2(), 0..=1), (sqrt2(), 0..=2), (quartic(), 0..=2)] {
        for n in levels {
            let pair = CloseFieldPair::new(&field, &f2t(), 1, n).unwrap();
            let bound = SupportBound::cube(1, 2);
            let matches = match_double_cosets(&pair, &bound).unwrap();
            // E^×/(1+π^nO) ≅ Z × (O/π^n)^×
            for m in &matches {
                assert_eq!(m.lhs_count, if n == 0 { 1 } else { 1 << (n - 1) });
            }
            let report = verify_algebra_iso(&pair, &bound, 2).unwrap();
            assert!(report.ok());
            assert!(report.instances.iter().all(|i| i.lhs_terms.len() == 1 && i.lhs_terms[0].coeff == 1));
        }
    }
}

/// `e = n = 1` is allowed: `Z_2/2 ≅ F_2[t]/t`.
#[test]
fn unramified_base_at_level_one() {
    let pair = CloseFieldPair::new(&q2(), &f2t(), 2, 1).unwrap();
    let report = verify_algebra_iso(&pair, &SupportBound::cube(2, 1), 2).unwrap();
    assert!(report.ok(), "{:?}", report.summary);
}

#[test]
fn level_must_not_exceed_ramification() {
    assert!(matches!(CloseFieldPair::new(&q2(), &f2t(), 2, 2), Err(Error::NotClose { e: 1, n: 2 })));
    assert!(matches!(CloseFieldPair::new(&sqrt2(), &f2t(), 2, 3), Err(Error::NotClose { .. })));
    let f3t = FieldDesc::laurent_series(3, 1).unwrap();
    assert!(matches!(CloseFieldPair::new(&q2(), &f3t, 2, 0), Err(Error::Mismatch(_))));
    assert!(CloseFieldPair::new(&f2t(), &f2t(), 2, 0).is_err());
}

#[test]
fn eta_basics() {
    let pair = CloseFieldPair::new(&sqrt2(), &f2t(), 2, 1).unwrap();
    let bound = SupportBound::cube(2, 1);
    let one = pair.lhs().unit().unwrap();
    assert_eq!(eta_map(&one, &pair, &bound).unwrap(), pair.rhs().unit().unwrap());
    for nu in &bound.nus {
        let h = HeckeElem::basis(1, pair.lhs().nabla(nu).unwrap());
        assert_eq!(eta_map(&h, &pair, &bound).unwrap(), HeckeElem::basis(1, pair.rhs().nabla(nu).unwrap()));
    }
    let far = HeckeElem::basis(1, pair.lhs().nabla(&[2, 0]).unwrap());
    assert!(eta_map(&far, &pair, &bound).is_err());
    assert!(pair.eta(&far).is_ok());
}

#[test]
fn family_over_ramified_fields() {
    let bound = SupportBound::cube(2, 1);
    let report = family_hecke(&[sqrt2(), quartic()], &f2t(), 2, 1, &bound, DEFAULT_BUDGET).unwrap();
    assert!(report.family.exceptions().is_empty());
    assert_eq!(report.agreeing, vec![0, 1]);
    assert_eq!(report.family.tail().entries.len(), 45 * 45);

    let empty = family_hecke(&[], &f2t(), 2, 1, &bound, DEFAULT_BUDGET).unwrap();
    assert!(empty.family.exceptions().is_empty());
    assert_eq!(empty.family.tail(), report.family.tail());
}

#[test]
fn support_bound_parsing() {
    assert_eq!(SupportBound::parse("1", 2).unwrap(), SupportBound::cube(2, 1));
    assert_eq!(SupportBound::cube(2, 1).nus.len(), 6);
    let b = SupportBound::parse("1,0; 0,0 ;0,-1", 2).unwrap();
    assert_eq!(b.nus, vec![vec![0, -1], vec![0, 0], vec![1, 0]]);
    assert!(SupportBound::parse("0,1", 2).is_err());
    assert!(SupportBound::parse("x", 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn eta_is_linear(picks in proptest::collection::vec((0usize..45, -5i64..=5), 0..6)) {
        let pair = CloseFieldPair::new(&sqrt2(), &f2t(), 2, 1).unwrap();
        let gens: Vec<_> = pair.lhs().bounded_basis(1).unwrap().into_iter().collect();
        let mut h = HeckeElem::zero(1);
        let mut expect = HeckeElem::zero(1);
        for (i, c) in picks {
            h.add_term(gens[i].clone(), c);
            expect = expect.add(&pair.eta(&HeckeElem::basis(1, gens[i].clone())).unwrap().scale(c)).unwrap();
        }
        prop_assert_eq!(pair.eta(&h).unwrap(), expect);
    }
}
