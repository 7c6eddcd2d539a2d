//! Acceptance suite. Runs every criterion, prints one line each, exits non-zero on any failure.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use closefield_core::closefields::{family_hecke, match_double_cosets, verify_algebra_iso, CloseFieldPair, SupportBound};
use closefield_core::hecke::{DoubleCoset, GrpElt, HeckeAlgebra, HeckeElem, DEFAULT_BUDGET};
use closefield_core::localfield::{El, FieldDesc, TruncRing};
use closefield_core::lubin_tate::{torsion_tower, FormalGroup};
use closefield_core::witt::{law_polynomials, specialize_check, verify_theta, FiniteField, WittAlgebra, WittRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Wall-clock limits per criterion, in seconds.
const LIMITS: [u64; 9] = [10, 30, 30, 10, 120, 300, 300, 300, 300];
/// Largest residue ring `O/π^N` for which θ is checked.
const THETA_MAX_ORDER: u64 = 512;
const RESAMPLES: usize = 1000;
const CLI_REPEATS: usize = 3;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn qp(p: u32, e: usize) -> FieldDesc {
    FieldDesc::qp_root(p, e).unwrap()
}
fn f2t() -> FieldDesc {
    FieldDesc::laurent_series(2, 1).unwrap()
}

fn witt_laws() -> Outcome {
    for (field, classical) in [(qp(2, 1), true), (qp(3, 1), true), (qp(2, 2), false)] {
        for n in 1..=3 {
            let table = law_polynomials(&field, n, 4).map_err(|e| format!("{field} n={n}: {e}"))?;
            table.check_ghost_consistency().map_err(|e| format!("{field} n={n}: {e}"))?;
            if classical {
                let rep = specialize_check(&table).map_err(|e| e.to_string())?;
                ensure(rep.matched(), || format!("{field} n={n}: {rep:?}"))?;
            }
        }
    }
    Ok(())
}

fn ring_axioms<A: WittAlgebra>(w: &WittRing<A>) -> Outcome {
    let all = w.elements();
    let idx: HashMap<_, usize> = all.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let add: Vec<Vec<usize>> =
        all.iter().map(|x| all.iter().map(|y| idx[&w.add(x, y).unwrap()]).collect()).collect();
    let mul: Vec<Vec<usize>> =
        all.iter().map(|x| all.iter().map(|y| idx[&w.mul(x, y).unwrap()]).collect()).collect();
    let (zero, one) = (idx[&w.zero()], idx[&w.one()]);
    let n = all.len();
    for a in 0..n {
        ensure(add[a][zero] == a && mul[a][one] == a, || "identity".into())?;
        ensure(add[a][idx[&w.neg(&all[a]).unwrap()]] == zero, || "negation".into())?;
        let pix = w.mul_pi(&all[a]).unwrap();
        ensure(w.frobenius(&w.verschiebung(&all[a]).unwrap()).unwrap() == pix, || "phi V".into())?;
        ensure(w.verschiebung(&w.frobenius(&all[a]).unwrap()).unwrap() == pix, || "V phi".into())?;
        for b in 0..n {
            ensure(add[a][b] == add[b][a] && mul[a][b] == mul[b][a], || "commutativity".into())?;
            for c in 0..n {
                ensure(add[add[a][b]][c] == add[a][add[b][c]], || "additive associativity".into())?;
                ensure(mul[mul[a][b]][c] == mul[a][mul[b][c]], || "multiplicative associativity".into())?;
                ensure(mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]], || "distributivity".into())?;
            }
        }
    }
    Ok(())
}

fn witt_rings() -> Outcome {
    let bases = [qp(2, 1), qp(3, 1), FieldDesc::unramified(2, 2).unwrap(), qp(2, 2)];
    for field in &bases {
        for n in 1..=3 {
            let table = law_polynomials(field, n, 1).map_err(|e| e.to_string())?;
            let w = WittRing::new(&table, FiniteField(field.residue().clone())).map_err(|e| e.to_string())?;
            ring_axioms(&w).map_err(|m| format!("{field} n={n}: {m}"))?;
        }
    }
    let theta_fields = [
        qp(2, 1),
        qp(3, 1),
        qp(2, 2),
        qp(2, 4),
        qp(3, 2),
        FieldDesc::unramified(2, 2).unwrap(),
        f2t(),
        FieldDesc::laurent_series(3, 1).unwrap(),
    ];
    for field in &theta_fields {
        let q = field.q() as u64;
        let mut level = 1;
        while q.pow(level) <= THETA_MAX_ORDER {
            let rep = verify_theta(field, level).map_err(|e| format!("{field} N={level}: {e}"))?;
            ensure(rep.ok() && rep.exhaustive, || format!("{field} N={level}: {rep:?}"))?;
            level += 1;
        }
    }
    Ok(())
}

fn lubin_tate_identities() -> Outcome {
    for field in [qp(2, 1), qp(3, 1), qp(2, 2)] {
        let q = field.q() as usize;
        for canonical in [false, true] {
            let group = if canonical {
                FormalGroup::canonical(&field, q * q * q, 4)
            } else {
                FormalGroup::classical_default(&field, q * q * q, 4)
            }
            .map_err(|e| format!("{field}: {e}"))?;
            let rep = group.check_identities(true).map_err(|e| e.to_string())?;
            ensure(rep.ok(), || format!("{field} canonical={canonical}: {:?}", rep.failed()))?;
        }
    }
    Ok(())
}

fn torsion_towers() -> Outcome {
    for p in [2u32, 3] {
        let q = p as usize;
        let group = FormalGroup::classical_default(&qp(p, 1), q * q * q, 4).map_err(|e| e.to_string())?;
        let tower = torsion_tower(&group, 2).map_err(|e| e.to_string())?;
        let rep = tower.check().map_err(|e| e.to_string())?;
        ensure(rep.ok(), || format!("q={q}: {:?}", rep.failed()))?;
        ensure(rep.torsion_degrees == [q - 1, q * (q - 1)], || format!("q={q}: {:?}", rep.torsion_degrees))?;
        ensure(rep.torsion_count == q * q, || format!("q={q}: count {}", rep.torsion_count))?;
        let limit = tower.limit_coordinate_check().map_err(|e| e.to_string())?;
        ensure(limit == [(1, true)], || format!("q={q}: {limit:?}"))?;
    }
    Ok(())
}

/// Structure constant of `h_{(1,0)}²` at `diag(p^a, p^b)` over `Q_p`, from the `p+1` upper
/// triangular representatives of `K diag(p,1) K / K`.
fn brute_square_coefficient(p: i64, a: u32, b: u32) -> i64 {
    let g = [[p.pow(a), 0], [0, p.pow(b)]];
    let mut reps = vec![[[1, 0], [0, p]]];
    reps.extend((0..p).map(|c| [[p, c], [0, 1]]));
    let mut count = 0;
    for x in reps {
        // x⁻¹ g = adj(x) g / p
        let adj = [[x[1][1], -x[0][1]], [-x[1][0], x[0][0]]];
        let m: Vec<i64> = (0..2).flat_map(|i| (0..2).map(move |j| (0..2).map(|k| adj[i][k] * g[k][j]).sum())).collect();
        if m.iter().any(|v| v % p != 0) {
            continue;
        }
        let y: Vec<i64> = m.iter().map(|v| v / p).collect();
        let det = y[0] * y[3] - y[1] * y[2];
        let det_val = (0..).take_while(|k| det % p.pow(*k + 1) == 0).count();
        if det_val == 1 && y.iter().any(|v| v % p != 0) {
            count += 1;
        }
    }
    count
}

fn sum_rule(alg: &HeckeAlgebra, a: &DoubleCoset, b: &DoubleCoset) -> Result<bool, String> {
    let e = |x: closefield_core::Error| x.to_string();
    let prod = alg.basis_product(a, b).map_err(e)?;
    let mut lhs = 0usize;
    for (d, &c) in prod.iter() {
        lhs += c as usize * alg.left_cosets(d).map_err(e)?.len();
    }
    Ok(lhs == alg.left_cosets(a).map_err(e)?.len() * alg.left_cosets(b).map_err(e)?.len())
}

fn hecke_relations() -> Outcome {
    let e = |x: closefield_core::Error| x.to_string();
    for field in [qp(2, 1), f2t()] {
        let alg = HeckeAlgebra::new(&field, 2, 0).map_err(e)?;
        let t = HeckeElem::basis(0, alg.nabla(&[1, 0]).map_err(e)?);
        let square = alg.convolve(&t, &t).map_err(e)?;
        let top = brute_square_coefficient(2, 2, 0);
        let mid = brute_square_coefficient(2, 1, 1);
        ensure(top == 1 && mid == 3, || format!("oracle gave {top}, {mid}"))?;
        let expect = HeckeElem::from_terms(
            0,
            [(alg.nabla(&[2, 0]).map_err(e)?, top), (alg.nabla(&[1, 1]).map_err(e)?, mid)],
        );
        ensure(square == expect, || format!("{field}: {square:?}"))?;
    }
    for field in [qp(2, 1), qp(2, 2), f2t()] {
        let alg = HeckeAlgebra::new(&field, 2, 1).map_err(e)?;
        let nus = alg.bounded_cocharacters(1);
        for a in &nus {
            for b in &nus {
                let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let lhs = alg
                    .convolve(&HeckeElem::basis(1, alg.nabla(a).map_err(e)?), &HeckeElem::basis(1, alg.nabla(b).map_err(e)?))
                    .map_err(e)?;
                ensure(lhs == HeckeElem::basis(1, alg.nabla(&sum).map_err(e)?), || format!("{field}: {a:?}+{b:?}"))?;
            }
        }
        let group = alg.finite_group().map_err(e)?;
        for nu in &nus {
            let t = HeckeElem::basis(1, alg.nabla(nu).map_err(e)?);
            for k in &group {
                let hk = HeckeElem::basis(1, alg.unit_class(k).map_err(e)?);
                let left = alg.convolve(&hk, &t).map_err(e)?;
                for j in &group {
                    let hj = HeckeElem::basis(1, alg.unit_class(j).map_err(e)?);
                    let lhs = alg.convolve(&left, &hj).map_err(e)?;
                    ensure(lhs == HeckeElem::basis(1, alg.coset_of(nu, k, j).map_err(e)?), || format!("{field}: {nu:?}"))?;
                }
            }
        }
    }
    for field in [qp(2, 1), f2t(), qp(2, 2)] {
        for level in 0..=1 {
            let alg = HeckeAlgebra::new(&field, 2, level).map_err(e)?;
            let basis: Vec<_> = alg.bounded_basis(1).map_err(e)?.into_iter().collect();
            for a in &basis {
                for b in &basis {
                    ensure(sum_rule(&alg, a, b)?, || format!("{field} n={level}: {a:?} * {b:?}"))?;
                }
            }
        }
    }
    Ok(())
}

fn close_instances() -> Vec<(FieldDesc, usize, u32, SupportBound)> {
    let mut out = vec![(qp(2, 1), 2, 0, SupportBound::cube(2, 1))];
    for e in [2, 4] {
        for n in 0..=1 {
            out.push((qp(2, e), 2, n, SupportBound::cube(2, 1)));
        }
    }
    for (e, top) in [(1, 1), (2, 2), (4, 2)] {
        for n in 0..=top {
            out.push((qp(2, e), 1, n, SupportBound::cube(1, 2)));
        }
    }
    out
}

fn close_fields() -> Outcome {
    let instances = close_instances();
    let reports: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = instances
            .iter()
            .map(|(field, r, n, bound)| {
                s.spawn(move || {
                    let pair = CloseFieldPair::new(field, &f2t(), *r, *n).map_err(|e| e.to_string())?;
                    verify_algebra_iso(&pair, bound, 2).map_err(|e| e.to_string())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for ((field, r, n, _), rep) in instances.iter().zip(reports) {
        let rep = rep.map_err(|m| format!("{field} r={r} n={n}: {m}"))?;
        ensure(rep.ok() && rep.summary.discrepancies == 0, || format!("{field} r={r} n={n}: {:?}", rep.summary))?;
        if *r == 1 {
            let one_term = rep.instances.iter().all(|i| i.lhs_terms.len() == 1 && i.lhs_terms[0].coeff == 1);
            ensure(one_term && rep.instances.iter().all(|i| i.lhs_terms == i.rhs_terms), || {
                format!("{field} torus n={n}: tables differ")
            })?;
        }
    }
    Ok(())
}

fn class_counts() -> Outcome {
    for (field, r, n, bound) in close_instances() {
        let pair = CloseFieldPair::new(&field, &f2t(), r, n).map_err(|e| e.to_string())?;
        let matches = match_double_cosets(&pair, &bound).map_err(|e| e.to_string())?;
        for m in &matches {
            ensure(m.ok() && m.lhs_count == m.rhs_count, || {
                format!("{field} r={r} n={n} nu={:?}: {} vs {}", m.nu, m.lhs_count, m.rhs_count)
            })?;
        }
        ensure(matches.len() == bound.nus.len(), || format!("{field}: {} classes matched", matches.len()))?;
    }
    Ok(())
}

fn families() -> Outcome {
    let report = family_hecke(&[qp(2, 2), qp(2, 4)], &f2t(), 2, 1, &SupportBound::cube(2, 1), DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    ensure(report.family.exceptions().is_empty(), || format!("exceptional indices {:?}", report.exceptional))
}

fn random_unit(ring: &TruncRing, rng: &mut ChaCha8Rng) -> GrpElt {
    loop {
        let m: Vec<El> = (0..4).map(|_| ring.random(rng)).collect();
        if let Ok(g) = GrpElt::integral_unit(ring, 2, m) {
            return g;
        }
    }
}

fn congruent(ring: &TruncRing, level: u32, rng: &mut ChaCha8Rng) -> GrpElt {
    if level == 0 {
        return random_unit(ring, rng);
    }
    let mut m: Vec<El> = (0..4).map(|_| ring.mul_pi_pow(&ring.random(rng), level)).collect();
    m[0] = ring.add(&m[0], &ring.one());
    m[3] = ring.add(&m[3], &ring.one());
    GrpElt::integral_unit(ring, 2, m).unwrap()
}

fn cli(args: &[String]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_closefield")).args(args).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)))?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let e = |x: closefield_core::Error| x.to_string();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let setups: Vec<(FieldDesc, u32)> =
        [(qp(2, 1), 0), (qp(2, 1), 1), (f2t(), 0), (f2t(), 1), (f2t(), 2), (qp(2, 2), 1), (qp(2, 2), 2)].into();
    let algebras: Vec<HeckeAlgebra> =
        setups.iter().map(|(f, n)| HeckeAlgebra::new(f, 2, *n)).collect::<Result<_, _>>().map_err(e)?;
    for sample in 0..RESAMPLES {
        let i = rng.gen_range(0..setups.len());
        let (field, level) = &setups[i];
        let alg = &algebras[i];
        let nus = alg.bounded_cocharacters(1);
        let nu = &nus[rng.gen_range(0..nus.len())];
        let ring = field.ring(level + 5).map_err(e)?;
        let g = random_unit(&ring, &mut rng)
            .mul(&GrpElt::nabla(&ring, nu))
            .and_then(|x| x.mul(&random_unit(&ring, &mut rng)))
            .map_err(e)?;
        let base = alg.canonical_double_coset(&g).map_err(e)?;
        let moved = congruent(&ring, *level, &mut rng)
            .mul(&g)
            .and_then(|x| x.mul(&congruent(&ring, *level, &mut rng)))
            .map_err(e)?;
        let again = alg.canonical_double_coset(&moved).map_err(e)?;
        ensure(again == base, || format!("sample {sample} over {field} n={level}: {base:?} vs {again:?}"))?;
        ensure(alg.canonicalize(&base).map_err(e)? == base, || format!("sample {sample}: not idempotent"))?;
    }

    let fields = format!("{}/../../fields", env!("CARGO_MANIFEST_DIR"));
    let f = |name: &str| format!("{fields}/{name}.toml");
    let commands: Vec<Vec<String>> = vec![
        vec!["close-verify", "--field-a", &f("q2_sqrt2"), "--field-b", &f("f2t"), "--level", "1", "--json"],
        vec!["family-hecke", "--fields", &format!("{},{}", f("q2_sqrt2"), f("q2_quartic")), "--tail", &f("f2t"), "--level", "1", "--json"],
        vec!["hecke", "classes", "--field", &f("q2_quartic"), "--level", "1", "--nu", "1,-1", "--json"],
        vec!["witt", "laws", "--field", &f("q3"), "--n", "3", "--precision", "4", "--json"],
        vec!["lt", "tower", "--field", &f("q3"), "--n", "2", "--deg", "27", "--precision", "4", "--json"],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();
    for args in &commands {
        let first = cli(args)?;
        for _ in 1..CLI_REPEATS {
            ensure(cli(args)? == first, || format!("{args:?}: output differs between runs"))?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Witt laws are integral, ghost-consistent and classical over Z_p", witt_laws),
        ("Witt rings satisfy the ring axioms and theta is an isomorphism", witt_rings),
        ("Lubin-Tate identities at cutoff q^3, precision 4", lubin_tate_identities),
        ("torsion towers for q in {2, 3}, n = 2", torsion_towers),
        ("Hecke relations for GL_2, q = 2", hecke_relations),
        ("close-field Hecke algebras agree at depth 2", close_fields),
        ("double-coset class counts agree", class_counts),
        ("family over ramified fields has no exceptions", families),
        ("determinism of canonical forms and CLI output", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|_| {
            ensure(elapsed <= Duration::from_secs(LIMITS[k]), || format!("took longer than {}s", LIMITS[k]))
        });
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name}  ({:.2}s)", k + 1, elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}  ({:.2}s)  {msg}", k + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
