//! Exact multivariable Laurent polynomials over `Z` or a prime field `F_p`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::fp::FpPoly;
use crate::error::LaurentError;

/// Coefficient ring tag.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum CoeffRing {
    Int,
    Fp(u64),
}

impl CoeffRing {
    fn reduce(&self, c: BigInt) -> BigInt {
        match self {
            CoeffRing::Int => c,
            CoeffRing::Fp(p) => {
                let p = BigInt::from(*p);
                ((c % &p) + &p) % &p
            }
        }
    }
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Int => write!(f, "Z"),
            CoeffRing::Fp(p) => write!(f, "F{p}"),
        }
    }
}

/// A Laurent polynomial: a finite map from integer exponent vectors to
/// nonzero coefficients, together with an ordered variable list and a
/// coefficient ring tag.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    ring: CoeffRing,
    vars: Vec<String>,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(ring: CoeffRing, vars: &[&str]) -> Self {
        LaurentPoly {
            ring,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: CoeffRing, vars: &[&str], c: impl Into<BigInt>) -> Self {
        let mut poly = LaurentPoly::zero(ring, vars);
        poly.add_term(vec![0; poly.vars.len()], c.into());
        poly
    }

    pub fn one(ring: CoeffRing, vars: &[&str]) -> Self {
        LaurentPoly::constant(ring, vars, 1)
    }

    /// `c * x^e` where `e` indexes the variable list.
    pub fn monomial(ring: CoeffRing, vars: &[&str], exps: &[i64], c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length mismatch");
        let mut poly = LaurentPoly::zero(ring, vars);
        poly.add_term(exps.to_vec(), c.into());
        poly
    }

    pub fn from_terms(
        ring: CoeffRing,
        vars: &[&str],
        terms: impl IntoIterator<Item = (Vec<i64>, BigInt)>,
    ) -> Self {
        let mut poly = LaurentPoly::zero(ring, vars);
        for (e, c) in terms {
            assert_eq!(e.len(), poly.vars.len(), "exponent vector length mismatch");
            poly.add_term(e, c);
        }
        poly
    }

    /// Accumulate a coefficient, dropping the term if it becomes zero.
    fn add_term(&mut self, exps: Vec<i64>, c: BigInt) {
        let c = self.ring.reduce(c);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = self.ring.reduce(e.get() + c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn assert_compatible(&self, rhs: &LaurentPoly) {
        assert!(
            self.ring == rhs.ring && self.vars == rhs.vars,
            "ring/variable mismatch: ({}; {:?}) vs ({}; {:?})",
            self.ring,
            self.vars,
            rhs.ring,
            rhs.vars
        );
    }

    /// Exact division in the Laurent ring. Fails with a distinct error if
    /// the divisor is zero or does not divide exactly.
    pub fn exact_div(&self, den: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.assert_compatible(den);
        if den.is_zero() {
            return Err(LaurentError::ZeroDivisor);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        // Shift both operands so the minimum exponent of every variable is
        // exactly 0. Monomials are units in the Laurent ring, and with this
        // normalization Laurent-exactness coincides with polynomial-ring
        // exactness (minimum exponents are additive over a domain).
        let num = self.shifted_min_zero();
        let den_s = den.shifted_min_zero();

        // Long division by leading-term reduction in lex order; exact
        // division never produces a nondivisible leading term.
        let mut rem = num.terms.clone();
        let mut quot: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        let (dlead_e, dlead_c) = den_s.terms.iter().next_back().expect("nonzero divisor");
        while let Some((rlead_e, rlead_c)) =
            rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))
        {
            let qe: Vec<i64> = rlead_e.iter().zip(dlead_e).map(|(a, b)| a - b).collect();
            if qe.iter().any(|&x| x < 0) {
                return Err(LaurentError::InexactDivision);
            }
            let qc = match self.ring {
                CoeffRing::Int => {
                    let (q, r) = num_integer::Integer::div_rem(&rlead_c, dlead_c);
                    if !r.is_zero() {
                        return Err(LaurentError::InexactDivision);
                    }
                    q
                }
                CoeffRing::Fp(p) => {
                    let inv = mod_inverse_bigint(dlead_c, p);
                    self.ring.reduce(rlead_c * inv)
                }
            };
            // rem -= (qc * x^qe) * den
            for (de, dc) in &den_s.terms {
                let e: Vec<i64> = qe.iter().zip(de).map(|(a, b)| a + b).collect();
                let delta = self.ring.reduce(-(&qc) * dc);
                if delta.is_zero() {
                    continue;
                }
                match rem.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let sum = self.ring.reduce(o.get() + delta);
                        if sum.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = sum;
                        }
                    }
                }
            }
            quot.insert(qe, qc);
        }
        Ok(LaurentPoly {
            ring: self.ring,
            vars: self.vars.clone(),
            terms: quot,
        })
        .map(|q| q.shifted_to_match(self, den))
    }

    /// Undo the normalization shifts from `exact_div` so that
    /// `quotient * den == self` holds exactly.
    fn shifted_to_match(mut self, num: &LaurentPoly, den: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return self;
        }
        let shift: Vec<i64> = (0..self.vars.len())
            .map(|i| {
                let nmin = num.min_exponent(i).unwrap_or(0);
                let dmin = den.min_exponent(i).unwrap_or(0);
                nmin - dmin
            })
            .collect();
        self.terms = self
            .terms
            .into_iter()
            .map(|(e, c)| (e.iter().zip(&shift).map(|(a, s)| a + s).collect(), c))
            .collect();
        self
    }

    pub fn min_exponent(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var]).min()
    }

    pub fn max_exponent(&self, var: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Max minus min exponent of the given variable. Errors on zero.
    pub fn degree_span(&self, var: usize) -> Result<i64, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        Ok(self.max_exponent(var).unwrap() - self.min_exponent(var).unwrap())
    }

    /// Leading term in lex order on exponent vectors.
    pub fn leading(&self) -> Option<(&Vec<i64>, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// True iff nonzero and the leading coefficient is a sign.
    ///
    /// For integer coefficients this is the usual monic condition on the
    /// highest-exponent term; the zero polynomial is not monic.
    pub fn is_monic(&self) -> bool {
        match self.leading() {
            None => false,
            Some((_, c)) => match self.ring {
                CoeffRing::Int => c.abs().is_one(),
                CoeffRing::Fp(p) => *c == BigInt::one() || *c == BigInt::from(p - 1),
            },
        }
    }

    /// Normalize by the unique unit `c * x^k`: lowest exponents become 0 in
    /// every variable, and the lex-leading coefficient becomes positive
    /// (over `Z`) or 1 (over `F_p`).
    pub fn normalized(&self) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = self.shifted_min_zero();
        let lead = out.leading().unwrap().1.clone();
        match out.ring {
            CoeffRing::Int => {
                if lead.is_negative() {
                    out = -&out;
                }
            }
            CoeffRing::Fp(p) => {
                let inv = mod_inverse_bigint(&lead, p);
                let ring = out.ring;
                out.terms = out
                    .terms
                    .into_iter()
                    .map(|(e, c)| (e, ring.reduce(c * &inv)))
                    .collect();
            }
        }
        out
    }

    fn shifted_min_zero(&self) -> LaurentPoly {
        let mut out = self.clone();
        if out.is_zero() {
            return out;
        }
        let mins: Vec<i64> = (0..out.vars.len())
            .map(|i| out.min_exponent(i).unwrap())
            .collect();
        out.terms = out
            .terms
            .into_iter()
            .map(|(e, c)| (e.iter().zip(&mins).map(|(a, m)| a - m).collect(), c))
            .collect();
        out
    }

    /// Equality up to multiplication by a unit of the Laurent ring.
    pub fn eq_up_to_unit(&self, rhs: &LaurentPoly) -> bool {
        self.ring == rhs.ring && self.vars == rhs.vars && self.normalized() == rhs.normalized()
    }

    /// Substitute `vars[i] -> new_var^exps[i]`, producing a one-variable
    /// Laurent polynomial.
    pub fn substitute_powers(&self, exps: &[i64], new_var: &str) -> LaurentPoly {
        assert_eq!(exps.len(), self.vars.len(), "class length mismatch");
        let mut out = LaurentPoly::zero(self.ring, &[new_var]);
        for (e, c) in &self.terms {
            let d: i64 = e.iter().zip(exps).map(|(a, p)| a * p).sum();
            out.add_term(vec![d], c.clone());
        }
        out
    }

    /// Reduce an integer polynomial modulo p.
    pub fn reduce_mod(&self, p: u64) -> LaurentPoly {
        assert_eq!(self.ring, CoeffRing::Int, "already over a prime field");
        let ring = CoeffRing::Fp(p);
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let mut out = LaurentPoly::zero(ring, &vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Rename the variable list (arity must match).
    pub fn with_vars(&self, vars: &[&str]) -> LaurentPoly {
        assert_eq!(vars.len(), self.vars.len());
        LaurentPoly {
            ring: self.ring,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: self.terms.clone(),
        }
    }

    /// View a one-variable polynomial as a dense `F_p[t]` polynomial plus
    /// the unit `t^shift`; requires ring `F_p` and a single variable.
    pub fn to_fp_dense(&self) -> (FpPoly, i64) {
        let p = match self.ring {
            CoeffRing::Fp(p) => p,
            CoeffRing::Int => panic!("integer polynomial has no dense F_p form"),
        };
        assert_eq!(self.vars.len(), 1, "dense form is univariate");
        if self.is_zero() {
            return (FpPoly::zero(p), 0);
        }
        let min = self.min_exponent(0).unwrap();
        let max = self.max_exponent(0).unwrap();
        let mut coeffs = vec![0u64; (max - min + 1) as usize];
        for (e, c) in &self.terms {
            let idx = (e[0] - min) as usize;
            coeffs[idx] = bigint_to_u64_mod(c, p);
        }
        (FpPoly::new(p, coeffs), min)
    }

    /// Inverse of `to_fp_dense` with shift 0.
    pub fn from_fp_dense(poly: &FpPoly, var: &str) -> LaurentPoly {
        let ring = CoeffRing::Fp(poly.modulus());
        let mut out = LaurentPoly::zero(ring, &[var]);
        for (i, &c) in poly.coeffs().iter().enumerate() {
            out.add_term(vec![i as i64], BigInt::from(c));
        }
        out
    }

    /// Monic gcd of univariate polynomials over a prime field, normalized
    /// to lowest exponent 0. `gcd(0, b)` is normalized `b`.
    pub fn gcd_univariate(&self, rhs: &LaurentPoly) -> LaurentPoly {
        self.assert_compatible(rhs);
        assert_eq!(self.vars.len(), 1, "gcd is univariate");
        if self.is_zero() {
            return rhs.normalized();
        }
        if rhs.is_zero() {
            return self.normalized();
        }
        let (a, _) = self.to_fp_dense();
        let (b, _) = rhs.to_fp_dense();
        let g = a.gcd(&b).strip_valuation();
        LaurentPoly::from_fp_dense(&g, &self.vars[0]).normalized()
    }
}

pub(crate) fn bigint_to_u64_mod(c: &BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let p_big = BigInt::from(p);
    (((c % &p_big) + &p_big) % &p_big).to_u64().unwrap()
}

fn mod_inverse_bigint(c: &BigInt, p: u64) -> BigInt {
    let a = bigint_to_u64_mod(c, p);
    // Fermat: a^(p-2) mod p
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = ((result as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    BigInt::from(result)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.ring, &[]);
        out.vars = self.vars.clone();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    // exponent vectors add when monomials multiply
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.assert_compatible(rhs);
        let mut out = LaurentPoly::zero(self.ring, &[]);
        out.vars = self.vars.clone();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(exp, _)| **exp != 0)
                .map(|(exp, v)| {
                    if *exp == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{exp}")
                    }
                })
                .collect();
            let mono = mono.join("*");
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}
