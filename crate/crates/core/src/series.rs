//! Truncated power series in up to three variables over a [`CoeffRing`].
//!
//! A [`SeriesRing`] fixes the coefficient ring, the number of variables and
//! the total-degree cutoff `D`; coefficients of total degree `> D` are dropped.
//! Monomials are stored densely, ordered by total degree.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::localfield::{El, PField, PNum, TruncRing};

/// Commutative rings usable as series coefficients.
pub trait CoeffRing: Clone {
    type Elem: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Whether `a` may be skipped in products (must imply `a` is exactly zero).
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

impl CoeffRing for TruncRing {
    type Elem = El;
    fn zero(&self) -> El {
        TruncRing::zero(self)
    }
    fn one(&self) -> El {
        TruncRing::one(self)
    }
    fn from_i64(&self, v: i64) -> El {
        self.from_int(v)
    }
    fn add(&self, a: &El, b: &El) -> El {
        TruncRing::add(self, a, b)
    }
    fn neg(&self, a: &El) -> El {
        TruncRing::neg(self, a)
    }
    fn mul(&self, a: &El, b: &El) -> El {
        TruncRing::mul(self, a, b)
    }
    fn is_zero(&self, a: &El) -> bool {
        TruncRing::is_zero(self, a)
    }
    fn sub(&self, a: &El, b: &El) -> El {
        TruncRing::sub(self, a, b)
    }
}

impl CoeffRing for PField {
    type Elem = PNum;
    fn zero(&self) -> PNum {
        PField::zero(self)
    }
    fn one(&self) -> PNum {
        PField::one(self)
    }
    fn from_i64(&self, v: i64) -> PNum {
        self.from_int(v)
    }
    fn add(&self, a: &PNum, b: &PNum) -> PNum {
        PField::add(self, a, b)
    }
    fn neg(&self, a: &PNum) -> PNum {
        PField::neg(self, a)
    }
    fn mul(&self, a: &PNum, b: &PNum) -> PNum {
        PField::mul(self, a, b)
    }
    fn is_zero(&self, a: &PNum) -> bool {
        self.is_exact_zero(a)
    }
}

pub const MAX_VARS: usize = 3;

/// Monomial bookkeeping shared by all series of one shape.
#[derive(Debug)]
pub struct Layout {
    nvars: usize,
    degree: usize,
    monos: Vec<[u16; MAX_VARS]>,
    /// Position of each monomial in the `(D+1)^nvars` cube.
    cube_pos: Vec<u32>,
    /// Inverse of `cube_pos` (`u32::MAX` outside the simplex).
    index: Vec<u32>,
    /// `offsets[d]` = index of the first monomial of total degree `d`.
    offsets: Vec<usize>,
}

impl Layout {
    fn new(nvars: usize, degree: usize) -> Self {
        let side = degree + 1;
        let mut monos = Vec::new();
        let mut offsets = Vec::with_capacity(side + 1);
        for d in 0..=degree {
            offsets.push(monos.len());
            let mut push = |m: [u16; MAX_VARS]| monos.push(m);
            match nvars {
                1 => push([d as u16, 0, 0]),
                2 => (0..=d).rev().for_each(|a| push([a as u16, (d - a) as u16, 0])),
                _ => {
                    for a in (0..=d).rev() {
                        for b in (0..=d - a).rev() {
                            push([a as u16, b as u16, (d - a - b) as u16]);
                        }
                    }
                }
            }
        }
        offsets.push(monos.len());
        let cube = side.pow(nvars as u32);
        let mut index = vec![u32::MAX; cube];
        let cube_pos: Vec<u32> = monos
            .iter()
            .map(|m| (0..nvars).rev().fold(0usize, |acc, v| acc * side + m[v] as usize) as u32)
            .collect();
        for (i, &pos) in cube_pos.iter().enumerate() {
            index[pos as usize] = i as u32;
        }
        Layout { nvars, degree, monos, cube_pos, index, offsets }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn len(&self) -> usize {
        self.monos.len()
    }
    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }
    pub fn monomial(&self, i: usize) -> &[u16] {
        &self.monos[i][..self.nvars]
    }
    pub fn total_degree(&self, i: usize) -> usize {
        self.monos[i].iter().map(|&x| x as usize).sum()
    }
    pub fn index_of(&self, exps: &[u16]) -> Option<usize> {
        if exps.len() != self.nvars || exps.iter().map(|&x| x as usize).sum::<usize>() > self.degree {
            return None;
        }
        let side = self.degree + 1;
        let pos = exps.iter().rev().fold(0usize, |acc, &x| acc * side + x as usize);
        Some(self.index[pos] as usize)
    }
}

/// A truncated power series; meaningful together with its [`SeriesRing`].
#[derive(Clone)]
pub struct Series<E> {
    layout: Arc<Layout>,
    coeffs: Vec<E>,
}

impl<E: PartialEq> PartialEq for Series<E> {
    fn eq(&self, other: &Self) -> bool {
        self.layout.nvars == other.layout.nvars
            && self.layout.degree == other.layout.degree
            && self.coeffs == other.coeffs
    }
}

impl<E> Series<E> {
    pub fn layout(&self) -> &Layout {
        &self.layout
    }
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }
    pub fn coeff_at(&self, i: usize) -> &E {
        &self.coeffs[i]
    }
    pub fn coeff(&self, exps: &[u16]) -> Option<&E> {
        self.layout.index_of(exps).map(|i| &self.coeffs[i])
    }
    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }
}

impl<E: fmt::Debug> fmt::Debug for Series<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, c) in self.coeffs.iter().enumerate() {
            m.entry(&self.layout.monomial(i), c);
        }
        m.finish()
    }
}

/// Arithmetic context: coefficient ring, variable count and degree cutoff.
#[derive(Clone)]
pub struct SeriesRing<R: CoeffRing> {
    ring: R,
    layout: Arc<Layout>,
}

impl<R: CoeffRing> fmt::Debug for SeriesRing<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SeriesRing(vars={}, D={})", self.layout.nvars, self.layout.degree)
    }
}

impl<R: CoeffRing> SeriesRing<R> {
    pub fn new(ring: R, nvars: usize, degree: usize) -> Result<Self> {
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::Invalid(format!("series in {nvars} variables are not supported")));
        }
        if degree > 4096 {
            return Err(Error::Invalid(format!("degree cutoff {degree} is too large")));
        }
        Ok(SeriesRing { ring, layout: Arc::new(Layout::new(nvars, degree)) })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn layout(&self) -> &Layout {
        &self.layout
    }
    pub fn nvars(&self) -> usize {
        self.layout.nvars
    }
    pub fn degree(&self) -> usize {
        self.layout.degree
    }

    /// The same shape over another coefficient ring.
    pub fn with_ring<S: CoeffRing>(&self, ring: S) -> SeriesRing<S> {
        SeriesRing { ring, layout: self.layout.clone() }
    }

    fn check(&self, a: &Series<R::Elem>) {
        assert!(
            Arc::ptr_eq(&self.layout, &a.layout)
                || (self.layout.nvars == a.layout.nvars && self.layout.degree == a.layout.degree),
            "series shape mismatch"
        );
    }

    pub fn zero(&self) -> Series<R::Elem> {
        Series { layout: self.layout.clone(), coeffs: vec![self.ring.zero(); self.layout.len()] }
    }

    pub fn constant(&self, c: R::Elem) -> Series<R::Elem> {
        let mut s = self.zero();
        s.coeffs[0] = c;
        s
    }

    pub fn one(&self) -> Series<R::Elem> {
        self.constant(self.ring.one())
    }

    pub fn monomial(&self, exps: &[u16], c: R::Elem) -> Series<R::Elem> {
        let mut s = self.zero();
        if let Some(i) = self.layout.index_of(exps) {
            s.coeffs[i] = c;
        }
        s
    }

    /// The variable `X_i`.
    pub fn var(&self, i: usize) -> Series<R::Elem> {
        let mut exps = [0u16; MAX_VARS];
        exps[i] = 1;
        self.monomial(&exps[..self.nvars()], self.ring.one())
    }

    pub fn from_coeffs(&self, coeffs: Vec<R::Elem>) -> Series<R::Elem> {
        assert_eq!(coeffs.len(), self.layout.len());
        Series { layout: self.layout.clone(), coeffs }
    }

    /// Series from `(exponents, coefficient)` pairs; terms beyond the cutoff are dropped.
    pub fn from_terms<'a, I>(&self, terms: I) -> Series<R::Elem>
    where
        I: IntoIterator<Item = (&'a [u16], R::Elem)>,
    {
        let mut s = self.zero();
        for (exps, c) in terms {
            if let Some(i) = self.layout.index_of(exps) {
                s.coeffs[i] = self.ring.add(&s.coeffs[i], &c);
            }
        }
        s
    }

    pub fn set(&self, a: &mut Series<R::Elem>, exps: &[u16], c: R::Elem) {
        if let Some(i) = self.layout.index_of(exps) {
            a.coeffs[i] = c;
        }
    }

    pub fn add(&self, a: &Series<R::Elem>, b: &Series<R::Elem>) -> Series<R::Elem> {
        self.check(a);
        self.check(b);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.ring.add(x, y)).collect();
        Series { layout: self.layout.clone(), coeffs }
    }

    pub fn sub(&self, a: &Series<R::Elem>, b: &Series<R::Elem>) -> Series<R::Elem> {
        self.check(a);
        self.check(b);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| self.ring.sub(x, y)).collect();
        Series { layout: self.layout.clone(), coeffs }
    }

    pub fn neg(&self, a: &Series<R::Elem>) -> Series<R::Elem> {
        let coeffs = a.coeffs.iter().map(|x| self.ring.neg(x)).collect();
        Series { layout: self.layout.clone(), coeffs }
    }

    pub fn scale(&self, c: &R::Elem, a: &Series<R::Elem>) -> Series<R::Elem> {
        let coeffs = a
            .coeffs
            .iter()
            .map(|x| if self.ring.is_zero(x) { x.clone() } else { self.ring.mul(c, x) })
            .collect();
        Series { layout: self.layout.clone(), coeffs }
    }

    pub fn is_zero(&self, a: &Series<R::Elem>) -> bool {
        a.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    /// Indices of the nonzero coefficients.
    pub fn support(&self, a: &Series<R::Elem>) -> Vec<usize> {
        (0..a.coeffs.len()).filter(|&i| !self.ring.is_zero(&a.coeffs[i])).collect()
    }

    pub fn mul(&self, a: &Series<R::Elem>, b: &Series<R::Elem>) -> Series<R::Elem> {
        self.check(a);
        self.check(b);
        let lay = &*self.layout;
        let (sa, sb) = (self.support(a), self.support(b));
        let (sa, sb, a, b) = if sa.len() <= sb.len() { (sa, sb, a, b) } else { (sb, sa, b, a) };
        let mut out = self.zero();
        let d = lay.degree;
        for &i in &sa {
            let di = lay.total_degree(i);
            let limit = lay.offsets[d - di + 1];
            let (ci, pi) = (&a.coeffs[i], lay.cube_pos[i]);
            for &j in sb.iter().take_while(|&&j| j < limit) {
                let k = lay.index[(pi + lay.cube_pos[j]) as usize] as usize;
                let t = self.ring.mul(ci, &b.coeffs[j]);
                out.coeffs[k] = self.ring.add(&out.coeffs[k], &t);
            }
        }
        out
    }

    pub fn pow(&self, a: &Series<R::Elem>, mut e: u64) -> Series<R::Elem> {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn require_no_constant(&self, g: &Series<R::Elem>) -> Result<()> {
        if !self.ring.is_zero(&g.coeffs[0]) {
            return Err(Error::Invalid("substituted series must have zero constant term".into()));
        }
        Ok(())
    }

    /// `f(g)` for a one-variable series `f` and `g` without constant term.
    pub fn compose1(&self, f: &Series<R::Elem>, g: &Series<R::Elem>) -> Result<Series<R::Elem>> {
        if f.layout.nvars != 1 {
            return Err(Error::Invalid("compose1 needs a one-variable outer series".into()));
        }
        self.require_no_constant(g)?;
        let top = f.layout.degree.min(self.degree());
        let mut acc = self.constant(f.coeffs[top].clone());
        for k in (0..top).rev() {
            acc = self.mul(&acc, g);
            acc.coeffs[0] = self.ring.add(&acc.coeffs[0], &f.coeffs[k]);
        }
        Ok(acc)
    }

    /// `f(g1, g2)` for a two-variable series `f`. Horner runs in the argument
    /// with the larger support; the inner one-variable pieces use the other.
    pub fn compose2(
        &self,
        f: &Series<R::Elem>,
        g1: &Series<R::Elem>,
        g2: &Series<R::Elem>,
    ) -> Result<Series<R::Elem>> {
        if f.layout.nvars != 2 {
            return Err(Error::Invalid("compose2 needs a two-variable outer series".into()));
        }
        self.require_no_constant(g1)?;
        self.require_no_constant(g2)?;
        let outer_first = self.support(g1).len() >= self.support(g2).len();
        let (outer, inner) = if outer_first { (g1, g2) } else { (g2, g1) };
        let fd = f.layout.degree.min(self.degree());
        // powers of the inner argument
        let mut inner_pows = Vec::with_capacity(fd + 1);
        inner_pows.push(self.one());
        for k in 1..=fd {
            let next = self.mul(&inner_pows[k - 1], inner);
            inner_pows.push(next);
        }
        let piece = |k: usize| -> Series<R::Elem> {
            // Σ_j c(k, j) inner^j where k is the outer exponent
            let mut acc = self.zero();
            for j in 0..=fd - k {
                let exps: [u16; 2] = if outer_first { [k as u16, j as u16] } else { [j as u16, k as u16] };
                let c = &f.coeffs[f.layout.index_of(&exps).unwrap()];
                if !self.ring.is_zero(c) {
                    acc = self.add(&acc, &self.scale(c, &inner_pows[j]));
                }
            }
            acc
        };
        let mut acc = piece(fd);
        for k in (0..fd).rev() {
            acc = self.add(&self.mul(&acc, outer), &piece(k));
        }
        Ok(acc)
    }

    /// Compositional inverse of a one-variable `f = X + …`.
    pub fn revert(&self, f: &Series<R::Elem>) -> Result<Series<R::Elem>> {
        if self.nvars() != 1 || f.layout.nvars != 1 {
            return Err(Error::Invalid("reversion is for one-variable series".into()));
        }
        if !self.ring.is_zero(&f.coeffs[0]) || f.coeffs.len() < 2 || f.coeffs[1] != self.ring.one() {
            return Err(Error::Invalid("series is not of the form X + higher terms".into()));
        }
        let x = self.var(0);
        let mut g = x.clone();
        for _ in 1..self.degree() {
            let err = self.sub(&self.compose1(f, &g)?, &x);
            if self.is_zero(&err) {
                break;
            }
            g = self.sub(&g, &err);
        }
        Ok(g)
    }

    /// Re-indexes a series from another shape: variable `i` of `a` becomes
    /// variable `map[i]` here; terms beyond the cutoff are dropped.
    pub fn embed(&self, a: &Series<R::Elem>, map: &[usize]) -> Series<R::Elem> {
        assert_eq!(map.len(), a.layout.nvars);
        let mut out = self.zero();
        for (i, c) in a.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            let mut exps = [0u16; MAX_VARS];
            for (v, &target) in map.iter().enumerate() {
                exps[target] += a.layout.monos[i][v];
            }
            if let Some(k) = self.layout.index_of(&exps[..self.nvars()]) {
                out.coeffs[k] = self.ring.add(&out.coeffs[k], c);
            }
        }
        out
    }

    /// Applies a coefficient map into another series ring of the same variable count.
    pub fn map_into<S: CoeffRing, F>(&self, a: &Series<R::Elem>, target: &SeriesRing<S>, mut f: F) -> Result<Series<S::Elem>>
    where
        F: FnMut(&R::Elem) -> Result<S::Elem>,
    {
        if target.nvars() != self.nvars() {
            return Err(Error::Invalid("variable counts differ".into()));
        }
        let mut out = target.zero();
        for (i, c) in a.coeffs.iter().enumerate() {
            if let Some(k) = target.layout.index_of(a.layout.monomial(i)) {
                out.coeffs[k] = f(c)?;
            }
        }
        Ok(out)
    }

    /// Nonzero terms as `(exponents, coefficient)`, in degree order.
    pub fn terms<'a>(&'a self, a: &'a Series<R::Elem>) -> impl Iterator<Item = (&'a [u16], &'a R::Elem)> + 'a {
        a.coeffs
            .iter()
            .enumerate()
            .filter(move |(_, c)| !self.ring.is_zero(c))
            .map(move |(i, c)| (a.layout.monomial(i), c))
    }

    /// Swaps the two variables of a two-variable series.
    pub fn swap(&self, a: &Series<R::Elem>) -> Series<R::Elem> {
        self.embed(a, &[1, 0])
    }
}
