//! Arithmetic in `Z_q / p^m = (Z/p^m)[y]/(lift of the residue polynomial)`.

/// Largest exponent `m` with `p^m < 2^62`, so that products fit in `u128`.
pub fn max_digits(p: u64) -> u32 {
    let mut m = 0;
    let mut acc: u128 = 1;
    while acc * (p as u128) < (1u128 << 62) {
        acc *= p as u128;
        m += 1;
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zq {
    pub p: u64,
    pub f: usize,
    pub m: u32,
    pub modulus: u64,
    /// Monic lift of the residue polynomial, low degree first (length f+1).
    pub poly: Vec<u64>,
}

impl Zq {
    pub fn new(p: u64, poly: &[u32], m: u32) -> Self {
        let modulus = p.pow(m);
        Zq {
            p,
            f: poly.len() - 1,
            m,
            modulus,
            poly: poly.iter().map(|&c| c as u64 % modulus.max(1)).collect(),
        }
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.f]
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        if self.modulus > 1 {
            v[0] = 1;
        }
        v
    }

    pub fn from_int(&self, v: i128) -> Vec<u64> {
        let mut out = self.zero();
        out[0] = v.rem_euclid(self.modulus as i128) as u64;
        out
    }

    /// Coordinates taken verbatim (reduced) from integer y-coefficients.
    pub fn from_ints(&self, v: &[i128]) -> Vec<u64> {
        let mut full: Vec<u128> = v
            .iter()
            .map(|&c| c.rem_euclid(self.modulus as i128) as u128)
            .collect();
        if full.len() < self.f {
            full.resize(self.f, 0);
        }
        self.reduce_wide(full)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| ((x as u128 + y as u128) % self.modulus as u128) as u64)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| if x == 0 { 0 } else { self.modulus - x }).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.add(a, &self.neg(b))
    }

    /// Reduces a wide coefficient vector (any length) modulo the lifted polynomial.
    pub fn reduce_wide(&self, mut v: Vec<u128>) -> Vec<u64> {
        let m = self.modulus as u128;
        for c in v.iter_mut() {
            *c %= m;
        }
        while v.len() > self.f {
            let lead = v.pop().unwrap();
            if lead != 0 {
                let off = v.len() - self.f;
                for i in 0..self.f {
                    let t = (lead * self.poly[i] as u128) % m;
                    v[off + i] = (v[off + i] + m - t) % m;
                }
            }
        }
        v.resize(self.f, 0);
        v.into_iter().map(|c| c as u64).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.modulus as u128;
        if self.f == 1 {
            return vec![((a[0] as u128 * b[0] as u128) % m) as u64];
        }
        let mut wide = vec![0u128; 2 * self.f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                wide[i + j] = (wide[i + j] + (x as u128 * y as u128) % m) % m;
            }
        }
        self.reduce_wide(wide)
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    /// p-adic valuation (`m` when zero).
    pub fn val(&self, a: &[u64]) -> u32 {
        a.iter()
            .filter(|&&c| c != 0)
            .map(|&c| {
                let mut c = c;
                let mut v = 0;
                while c % self.p == 0 {
                    c /= self.p;
                    v += 1;
                }
                v
            })
            .min()
            .unwrap_or(self.m)
    }

    /// Reduction to a smaller modulus `p^k`.
    pub fn truncate(&self, a: &[u64], k: u32) -> Vec<u64> {
        let md = self.p.pow(k.min(self.m));
        a.iter().map(|&c| c % md).collect()
    }

    /// Residue field code of `a mod p`.
    pub fn residue(&self, a: &[u64]) -> u32 {
        a.iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + c % self.p) as u32
    }

    /// Simple lift of a residue code (digits as y-coefficients).
    pub fn lift_code(&self, code: u32) -> Vec<u64> {
        let mut out = self.zero();
        let mut c = code as u64;
        for slot in out.iter_mut() {
            *slot = (c % self.p) % self.modulus.max(1);
            c /= self.p;
        }
        out
    }

    /// Teichmüller lift: the fixed point of `z -> z^q` above `code`.
    pub fn teichmuller(&self, code: u32) -> Vec<u64> {
        let q = self.p.pow(self.f as u32);
        let mut z = self.lift_code(code);
        loop {
            let next = self.pow(&z, q);
            if next == z {
                return z;
            }
            z = next;
        }
    }

    /// Inverse of a unit (Newton iteration).
    pub fn inv(&self, a: &[u64], residue_inv: u32) -> Vec<u64> {
        let mut z = self.lift_code(residue_inv);
        let two = self.from_int(2);
        let mut prec = 1;
        while prec < self.m.max(1) {
            let az = self.mul(a, &z);
            z = self.mul(&z, &self.sub(&two, &az));
            prec *= 2;
        }
        z
    }

    /// Exact division by `p` of an element divisible by `p` (result mod p^{m-1}, zero padded).
    pub fn div_p(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&c| c / self.p).collect()
    }
}
