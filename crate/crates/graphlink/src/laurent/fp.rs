//! Dense univariate polynomials over a prime field `F_p`.
//!
//! These are the workhorse behind Smith normal form over `F_p[t]` and the
//! univariate gcd. Laurent polynomials over `F_p` are handled by shifting
//! exponents so the minimum is 0 and delegating to this type.

use std::fmt;

/// `a^(p-2) mod p`, the inverse of `a` in `F_p`.
fn mod_inv(a: u64, p: u64) -> u64 {
    // extended Euclid; p is prime and a != 0 mod p
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "{a} is not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

/// Dense polynomial in one variable with coefficients in `F_p`.
///
/// Coefficients are stored low degree first and kept reduced to `0..p`;
/// the representation never has trailing zeros, so `coeffs.is_empty()`
/// is the zero polynomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: impl IntoIterator<Item = u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, [1])
    }

    pub fn constant(p: u64, c: u64) -> Self {
        FpPoly::new(p, [c])
    }

    /// `c * t^d`
    pub fn monomial(p: u64, c: u64, d: usize) -> Self {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c % p;
        FpPoly::new(p, coeffs)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree of the polynomial. Panics on zero.
    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of the zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn leading_coeff(&self) -> u64 {
        *self.coeffs.last().expect("leading coefficient of zero")
    }

    /// Multiplicity of the root t = 0, i.e. the lowest nonzero exponent.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|&c| c != 0)
            .expect("valuation of the zero polynomial")
    }

    pub fn add(&self, rhs: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, rhs.p);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = rhs.coeffs.get(i).copied().unwrap_or(0);
            *slot = (a + b) % self.p;
        }
        FpPoly::new(self.p, out)
    }

    pub fn sub(&self, rhs: &FpPoly) -> FpPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> FpPoly {
        FpPoly {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        let c = c % self.p;
        FpPoly::new(self.p, self.coeffs.iter().map(|&a| a * c % self.p))
    }

    pub fn mul(&self, rhs: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, rhs.p);
        if self.is_zero() || rhs.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let slot = &mut out[i + j];
                *slot = (*slot + mul_mod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, out)
    }

    /// Euclidean division: `self = q * rhs + r` with `deg r < deg rhs`.
    pub fn div_rem(&self, rhs: &FpPoly) -> (FpPoly, FpPoly) {
        debug_assert_eq!(self.p, rhs.p);
        assert!(!rhs.is_zero(), "division by the zero polynomial");
        let p = self.p;
        if self.is_zero() || self.degree() < rhs.degree() {
            return (FpPoly::zero(p), self.clone());
        }
        let inv_lc = mod_inv(rhs.leading_coeff(), p);
        let mut rem = self.coeffs.clone();
        let dr = rhs.degree();
        let mut quot = vec![0u64; rem.len() - dr];
        for k in (dr..rem.len()).rev() {
            let c = mul_mod(rem[k], inv_lc, p);
            if c == 0 {
                continue;
            }
            quot[k - dr] = c;
            for (i, &b) in rhs.coeffs.iter().enumerate() {
                let idx = k - dr + i;
                rem[idx] = (rem[idx] + p - mul_mod(c, b, p)) % p;
            }
        }
        (FpPoly::new(p, quot), FpPoly::new(p, rem))
    }

    /// Monic gcd; `gcd(0, b)` is monic-normalized `b`.
    pub fn gcd(&self, rhs: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scale so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(mod_inv(self.leading_coeff(), self.p))
    }

    /// Divide out `t^valuation`, the unit part in the Laurent ring.
    pub fn strip_valuation(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        FpPoly {
            p: self.p,
            coeffs: self.coeffs[self.valuation()..].to_vec(),
        }
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 if c == 1 => "t".to_string(),
                1 => format!("{c}t"),
                _ if c == 1 => format!("t^{i}"),
                _ => format!("{c}t^{i}"),
            })
            .collect();
        write!(f, "{} (mod {})", terms.join(" + "), self.p)
    }
}
