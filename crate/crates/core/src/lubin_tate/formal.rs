//! The logarithm, exponential, endomorphisms and group law of a Lubin–Tate formal group.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::localfield::{El, FieldDesc, PField, PNum, TruncRing};
use crate::series::{Series, SeriesRing};

/// Where the formal group comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// `log = Σ X^{q^r}/π^r` and `f_π = exp(π·log)`.
    Canonical,
    /// A given series `f` with `log∘f = π·log`.
    Classical,
}

/// A Lubin–Tate formal group over `O` at degree cutoff `D`, with integral
/// series reported modulo `π^M`.
#[derive(Clone, Debug)]
pub struct FormalGroup {
    field: FieldDesc,
    source: Source,
    m: u32,
    pf: PField,
    s1: SeriesRing<PField>,
    int: TruncRing,
    i1: SeriesRing<TruncRing>,
    log: Series<PNum>,
    exp: Series<PNum>,
    given: Option<Series<PNum>>,
}

/// Relative precision used for series with denominators.
pub fn working_precision(field: &FieldDesc, degree: usize, m: u32) -> u32 {
    (m + 2 * degree as u32 + 4).min(field.max_precision() - field.e().unwrap_or(0))
}

/// `log = Σ_{q^r ≤ D} X^{q^r}/π^r`.
pub fn lt_log(s1: &SeriesRing<PField>) -> Series<PNum> {
    let pf = s1.ring();
    let q = pf.ring().q() as usize;
    let mut log = s1.zero();
    let (mut k, mut r) = (1usize, 0i64);
    while k <= s1.degree() {
        s1.set(&mut log, &[k as u16], pf.pi_pow(-r));
        k *= q;
        r += 1;
    }
    log
}

/// Compositional inverse of a logarithm (`X + …`).
pub fn lt_exp(s1: &SeriesRing<PField>, log: &Series<PNum>) -> Result<Series<PNum>> {
    s1.revert(log)
}

/// Whether `a ∈ π^m O` as far as its precision shows.
pub fn is_small(pf: &PField, a: &PNum, m: i64) -> bool {
    pf.val_bound(a).is_none_or(|v| v >= m)
}

impl FormalGroup {
    /// The canonical group with `log = Σ X^{q^r}/π^r`.
    pub fn canonical(field: &FieldDesc, degree: usize, m: u32) -> Result<Self> {
        let pf = PField::new(field, working_precision(field, degree, m))?;
        let s1 = SeriesRing::new(pf.clone(), 1, degree)?;
        let log = lt_log(&s1);
        Self::from_log(field, Source::Canonical, m, pf, s1, log)
    }

    /// The group of a classical Lubin–Tate series `f` given by `(degree, digits)`
    /// terms, each coefficient an element `Σ [d_j] π^j` of `O`.
    ///
    /// The logarithm is the unique `log = X + …` with `log∘f = π·log`, solved
    /// degree by degree: `c_k (π − π^k) = Σ_{j<k} c_j [X^k] f^j`.
    pub fn classical(field: &FieldDesc, degree: usize, m: u32, f: &[(usize, Vec<u32>)]) -> Result<Self> {
        let pf = PField::new(field, working_precision(field, degree, m))?;
        let s1 = SeriesRing::new(pf.clone(), 1, degree)?;
        if let Some((k, _)) = f.iter().find(|(k, d)| *k > degree && d.iter().any(|&x| x != 0)) {
            return Err(Error::Precision(format!("degree cutoff {degree} is below the term X^{k} of the series")));
        }
        let exact = pf.ring();
        let mut fs = s1.zero();
        for (k, d) in f {
            let i = [*k as u16];
            let c = pf.from_integral_exact(&exact.from_digits(d)?);
            let sum = pf.add(fs.coeff(&i).cloned().as_ref().unwrap_or(&pf.zero()), &c);
            s1.set(&mut fs, &i, sum);
        }
        check_lubin_tate(&pf, &fs, field.q() as usize, m)?;

        let mut powers = vec![s1.one(), fs.clone()];
        for j in 2..degree {
            let next = s1.mul(&powers[j - 1], &fs);
            powers.push(next);
        }
        let pi = pf.pi_pow(1);
        let mut log = s1.var(0);
        for k in 2..=degree {
            let mut acc = pf.zero();
            for (j, power) in powers.iter().enumerate().take(k).skip(1) {
                let c = log.coeff(&[j as u16]).unwrap();
                if !pf.is_exact_zero(c) {
                    acc = pf.add(&acc, &pf.mul(c, power.coeff(&[k as u16]).unwrap()));
                }
            }
            let denom = pf.sub(&pi, &pf.pi_pow(k as i64));
            s1.set(&mut log, &[k as u16], pf.mul(&acc, &pf.inv(&denom)?));
        }
        let mut group = Self::from_log(field, Source::Classical, m, pf, s1, log)?;
        group.given = Some(fs);
        Ok(group)
    }

    /// The default classical series `πX + X^q`.
    pub fn classical_default(field: &FieldDesc, degree: usize, m: u32) -> Result<Self> {
        Self::classical(field, degree, m, &[(1, vec![0, 1]), (field.q() as usize, vec![1])])
    }

    /// `π^{−n} f^{∘n}` for the given series of a classical group.
    pub fn limit_approximant(&self, n: usize) -> Result<Series<PNum>> {
        let f = self.given.as_ref().ok_or_else(|| Error::Invalid("the group has no given series".into()))?;
        let mut iterate = self.s1.var(0);
        for _ in 0..n {
            iterate = self.s1.compose1(f, &iterate)?;
        }
        Ok(self.s1.scale(&self.pf.pi_pow(-(n as i64)), &iterate))
    }

    fn from_log(
        field: &FieldDesc,
        source: Source,
        m: u32,
        pf: PField,
        s1: SeriesRing<PField>,
        log: Series<PNum>,
    ) -> Result<Self> {
        let exp = lt_exp(&s1, &log)?;
        let int = field.ring(m)?;
        let i1 = SeriesRing::new(int.clone(), 1, s1.degree())?;
        Ok(FormalGroup { field: field.clone(), source, m, pf, s1, int, i1, log, exp, given: None })
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }
    pub fn source(&self) -> &Source {
        &self.source
    }
    pub fn degree(&self) -> usize {
        self.s1.degree()
    }
    pub fn precision(&self) -> u32 {
        self.m
    }
    pub fn pfield(&self) -> &PField {
        &self.pf
    }
    pub fn series(&self) -> &SeriesRing<PField> {
        &self.s1
    }
    pub fn integral_ring(&self) -> &TruncRing {
        &self.int
    }
    pub fn integral_series(&self) -> &SeriesRing<TruncRing> {
        &self.i1
    }
    pub fn log(&self) -> &Series<PNum> {
        &self.log
    }
    pub fn exp(&self) -> &Series<PNum> {
        &self.exp
    }

    /// `[a](X) = exp(a·log X)` with coefficients in `E`.
    pub fn mult_exact(&self, a: &PNum) -> Result<Series<PNum>> {
        self.s1.compose1(&self.exp, &self.s1.scale(a, &self.log))
    }

    /// `[a](X)` reduced into `O/π^M`; fails if a coefficient is not integral.
    pub fn mult(&self, a: &PNum) -> Result<Series<El>> {
        self.integral(&self.mult_exact(a)?)
    }

    /// `[a](X)` for the element of `O` whose digits are the canonical
    /// representative of `a ∈ O/π^k`.
    pub fn mult_by(&self, src: &TruncRing, a: &El) -> Result<Series<El>> {
        if src.precision() > self.pf.cap() {
            return Err(Error::Precision(format!("multiplier known to pi^{} exceeds the working cap", src.precision())));
        }
        self.mult(&self.pf.from_integral_exact(&self.pf.ring().lift_from(src, a)))
    }

    pub fn f_pi_exact(&self) -> Result<Series<PNum>> {
        self.mult_exact(&self.pf.pi_pow(1))
    }

    /// `f_π = [π]` modulo `π^M`.
    pub fn f_pi(&self) -> Result<Series<El>> {
        self.mult(&self.pf.pi_pow(1))
    }

    /// The series cutting out torsion: the given `f` for a classical group
    /// (flagged as an exact polynomial when it has no terms near the cutoff),
    /// otherwise `f_π = exp(π·log)`.
    pub fn torsion_series(&self) -> Result<(Series<El>, bool)> {
        match &self.given {
            Some(f) => {
                let top = f.coeffs().iter().rposition(|c| !self.pf.is_exact_zero(c)).unwrap_or(0);
                Ok((self.integral(f)?, top < self.degree()))
            }
            None => Ok((self.f_pi()?, false)),
        }
    }

    /// Reduces a series with coefficients in `E` to `O/π^M`.
    pub fn integral(&self, a: &Series<PNum>) -> Result<Series<El>> {
        let target = self.i1.with_ring(self.int.clone());
        self.s1.map_into(a, &target, |c| self.pf.to_integral(c, &self.int))
    }

    /// `F(X, Y) = exp(log X + log Y)` modulo `π^M`.
    pub fn group_law(&self) -> Result<Series<El>> {
        let s2 = SeriesRing::new(self.pf.clone(), 2, self.degree())?;
        let lx = s2.embed(&self.log, &[0]);
        let ly = s2.embed(&self.log, &[1]);
        let f = s2.compose1(&self.exp, &s2.add(&lx, &ly))?;
        let i2 = SeriesRing::new(self.int.clone(), 2, self.degree())?;
        s2.map_into(&f, &i2, |c| self.pf.to_integral(c, &self.int))
    }
}

fn check_lubin_tate(pf: &PField, f: &Series<PNum>, q: usize, m: u32) -> Result<()> {
    let coeffs = f.coeffs();
    let at = |k: usize| coeffs.get(k).cloned().unwrap_or_else(|| pf.zero());
    if !pf.is_exact_zero(&at(0)) {
        return Err(Error::Invalid("a Lubin–Tate series has no constant term".into()));
    }
    if !is_small(pf, &pf.sub(&at(1), &pf.pi_pow(1)), m as i64) {
        return Err(Error::Invalid("a Lubin–Tate series has linear term pi*X".into()));
    }
    for (k, c) in coeffs.iter().enumerate().skip(2) {
        let expected = if k == q { pf.one() } else { pf.zero() };
        if !is_small(pf, &pf.sub(c, &expected), 1) {
            return Err(Error::Invalid(format!("a Lubin–Tate series is X^{q} mod pi; degree {k} disagrees")));
        }
    }
    Ok(())
}

/// Outcome of the identity checks on a [`FormalGroup`].
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub field: String,
    pub source: Source,
    pub degree: usize,
    pub precision: u32,
    pub checks: Vec<(String, bool)>,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|(_, b)| *b)
    }
    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, b)| !b).map(|(s, _)| s.as_str()).collect()
    }
}

impl FormalGroup {
    /// Checks `log∘f_π = π·log`, `exp∘log = log∘exp = X`, integrality of
    /// `f_π` with `f_π ≡ X^q (mod π)` and linear term `π`, the group-law axioms,
    /// `[a]∘[b] = [ab]` and `[a+b] = F([a], [b])` for `a, b ∈ {1, −1, π}`.
    pub fn check_identities(&self, associativity: bool) -> Result<IdentityReport> {
        let (pf, s1, int, i1) = (&self.pf, &self.s1, &self.int, &self.i1);
        let m = self.m as i64;
        let mut checks = Vec::new();
        let small = |s: &Series<PNum>| s.coeffs().iter().all(|c| is_small(pf, c, m));

        let fpe = self.f_pi_exact()?;
        let lhs = s1.compose1(&self.log, &fpe)?;
        let rhs = s1.scale(&pf.pi_pow(1), &self.log);
        checks.push(("log(f_pi) = pi*log".to_string(), small(&s1.sub(&lhs, &rhs))));
        let x = s1.var(0);
        checks.push(("exp(log) = X".to_string(), small(&s1.sub(&s1.compose1(&self.exp, &self.log)?, &x))));
        checks.push(("log(exp) = X".to_string(), small(&s1.sub(&s1.compose1(&self.log, &self.exp)?, &x))));

        let q1 = self.int.q() as i64 - 1;
        let bounded = self.exp.coeffs().iter().enumerate().skip(1).all(|(k, c)| {
            pf.valuation(c).is_none_or(|v| v >= -((k as i64 - 1) / q1))
        });
        checks.push(("exp coefficients have valuation >= -(k-1)/(q-1)".to_string(), bounded));

        let fp = self.integral(&fpe);
        checks.push(("f_pi is integral".to_string(), fp.is_ok()));
        let Ok(fp) = fp else {
            return Ok(self.report(checks));
        };
        let q = int.q() as usize;
        let mod_pi = fp.coeffs().iter().enumerate().all(|(k, c)| {
            let expected = if k == q { int.one() } else { int.zero() };
            int.val(&int.sub(c, &expected)) >= 1
        });
        checks.push(("f_pi = X^q mod pi".to_string(), mod_pi));
        checks.push(("f_pi has linear term pi".to_string(), fp.coeff(&[1]) == Some(&int.pi())));

        let law = self.group_law();
        checks.push(("group law is integral".to_string(), law.is_ok()));
        let Ok(law) = law else {
            return Ok(self.report(checks));
        };
        let i2 = SeriesRing::new(int.clone(), 2, self.degree())?;
        let unit = i2.embed(&law, &[0, 0]);
        let unit_ok = law.coeffs().iter().enumerate().all(|(i, c)| {
            let e = law.layout().monomial(i);
            e[1] != 0 || *c == if e[0] == 1 { int.one() } else { int.zero() }
        });
        checks.push(("F(X, 0) = X".to_string(), unit_ok && unit.coeffs().len() == law.coeffs().len()));
        checks.push(("F(X, Y) = F(Y, X)".to_string(), i2.swap(&law) == law));
        if associativity {
            checks.push(("F(F(X, Y), Z) = F(X, F(Y, Z))".to_string(), associative(int, &law, self.degree())?));
        }

        let units = [("1", pf.one()), ("-1", pf.from_int(-1)), ("pi", pf.pi_pow(1))];
        let mults: Vec<Series<El>> = units.iter().map(|(_, a)| self.mult(a)).collect::<Result<_>>()?;
        checks.push(("[1] = X".to_string(), mults[0] == i1.var(0)));
        for (i, (na, a)) in units.iter().enumerate() {
            for (j, (nb, b)) in units.iter().enumerate() {
                let composed = i1.compose1(&mults[i], &mults[j])?;
                let product = self.mult(&pf.mul(a, b))?;
                checks.push((format!("[{na}][{nb}] = [{na}*{nb}]"), composed == product));
                if i <= j {
                    let sum = self.mult(&pf.add(a, b))?;
                    let f_ab = compose_law(int, &law, &mults[i], &mults[j], self.degree())?;
                    checks.push((format!("[{na}+{nb}] = F([{na}], [{nb}])"), f_ab == sum));
                }
            }
        }
        let neg = &mults[1];
        let inverse = compose_law(int, &law, &i1.var(0), neg, self.degree())?;
        checks.push(("F(X, [-1](X)) = 0".to_string(), i1.is_zero(&inverse)));
        Ok(self.report(checks))
    }

    fn report(&self, checks: Vec<(String, bool)>) -> IdentityReport {
        IdentityReport {
            field: self.field.name(),
            source: self.source.clone(),
            degree: self.degree(),
            precision: self.m,
            checks,
        }
    }
}

/// `F(g1(X), g2(X))` for one-variable series `g1, g2`.
fn compose_law(int: &TruncRing, law: &Series<El>, g1: &Series<El>, g2: &Series<El>, degree: usize) -> Result<Series<El>> {
    let i1 = SeriesRing::new(int.clone(), 1, degree)?;
    let mut acc = i1.zero();
    let mut p1 = vec![i1.one()];
    let mut p2 = vec![i1.one()];
    for k in 1..=degree {
        p1.push(i1.mul(&p1[k - 1], g1));
        p2.push(i1.mul(&p2[k - 1], g2));
    }
    for (i, c) in law.coeffs().iter().enumerate() {
        if int.is_zero(c) {
            continue;
        }
        let e = law.layout().monomial(i);
        let term = i1.mul(&p1[e[0] as usize], &p2[e[1] as usize]);
        acc = i1.add(&acc, &i1.scale(c, &term));
    }
    Ok(acc)
}

/// `F(F(X, Y), Z) = F(X, F(Y, Z))` in three variables modulo `π^M`.
fn associative(int: &TruncRing, law: &Series<El>, degree: usize) -> Result<bool> {
    let i3 = SeriesRing::new(int.clone(), 3, degree)?;
    let xy = i3.embed(law, &[0, 1]);
    let yz = i3.embed(law, &[1, 2]);
    let left = i3.compose2(law, &xy, &i3.var(2))?;
    let right = i3.compose2(law, &i3.var(0), &yz)?;
    Ok(left == right)
}
