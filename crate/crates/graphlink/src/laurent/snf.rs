//! Smith normal form over the two Euclidean domains used here: `Z` with
//! arbitrary-precision integers, and `F_p[t]` with dense polynomials.
//!
//! Plain row/column reduction with the minimal-size entry as pivot.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::fp::FpPoly;
use super::matrix::Mat;

/// Entry of a matrix over a Euclidean domain, as needed by the reduction.
pub trait SnfEntry: Clone + PartialEq + std::fmt::Debug {
    /// Euclidean size used for pivot selection; never called on zero.
    type Size: Ord;

    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Euclidean division with `size(r) < size(rhs)` (or `r = 0`).
    fn div_rem(&self, rhs: &Self) -> (Self, Self);
    fn size(&self) -> Self::Size;
    /// The unit `u` such that `self / u` is the canonical associate
    /// (positive integers, monic polynomials).
    fn canonical_unit(&self) -> Self;
    /// Order of vanishing at the localized unit (the power of `t` dividing
    /// a polynomial); 0 for rings without one. Never called on zero.
    fn local_valuation(&self) -> usize {
        0
    }
    /// Exact division by the localized unit to the given power.
    fn divide_local_unit(&self, v: usize) -> Self {
        debug_assert_eq!(v, 0);
        self.clone()
    }
}

impl SnfEntry for BigInt {
    type Size = BigUint;

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        num_integer::Integer::div_rem(self, rhs)
    }
    fn size(&self) -> BigUint {
        self.abs().to_biguint().unwrap()
    }
    fn canonical_unit(&self) -> Self {
        if self.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
}

impl SnfEntry for FpPoly {
    type Size = usize;

    fn is_zero(&self) -> bool {
        FpPoly::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        FpPoly::zero(self.modulus())
    }
    fn one_like(&self) -> Self {
        FpPoly::one(self.modulus())
    }
    fn add(&self, rhs: &Self) -> Self {
        FpPoly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        FpPoly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        FpPoly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        FpPoly::neg(self)
    }
    fn div_rem(&self, rhs: &Self) -> (Self, Self) {
        FpPoly::div_rem(self, rhs)
    }
    fn size(&self) -> usize {
        self.degree()
    }
    fn canonical_unit(&self) -> Self {
        FpPoly::constant(self.modulus(), self.leading_coeff())
    }
    fn local_valuation(&self) -> usize {
        self.valuation()
    }
    fn divide_local_unit(&self, v: usize) -> Self {
        if v == 0 {
            return self.clone();
        }
        FpPoly::new(self.modulus(), self.coeffs()[v..].to_vec())
    }
}

/// Outcome of a Smith normal form computation.
#[derive(Clone, Debug)]
pub struct SnfResult<T> {
    /// Invariant factors, canonical associates, each dividing the next;
    /// trailing zeros are not stored.
    pub diagonal: Vec<T>,
    /// Number of nonzero diagonal entries = rank over the fraction field.
    pub rank: usize,
    /// `left * original * right = diag` when transforms were requested.
    pub left: Option<Mat<T>>,
    pub right: Option<Mat<T>>,
}

/// Smith normal form without transforms: diagonalize by row/column
/// reduction, then repair the divisibility chain on the diagonal by
/// pairwise gcd/lcm replacement (which presents the same module and
/// preserves all determinantal ideals).
pub fn smith_normal_form<T: SnfEntry>(m: &Mat<T>) -> SnfResult<T> {
    snf_without_transforms(m, false)
}

/// Smith normal form of a polynomial matrix read over the Laurent ring,
/// where the variable is a unit: row and column valuations are divided
/// out as the reduction proceeds (these are unit scalings there, and they
/// keep intermediate degrees small), and the invariant factors come back
/// with valuation 0.
pub fn laurent_smith_normal_form<T: SnfEntry>(m: &Mat<T>) -> SnfResult<T> {
    snf_without_transforms(m, true)
}

fn snf_without_transforms<T: SnfEntry>(m: &Mat<T>, localized: bool) -> SnfResult<T> {
    if m.nrows() * m.ncols() == 0 {
        return SnfResult {
            diagonal: vec![],
            rank: 0,
            left: None,
            right: None,
        };
    }
    let mut diagonal = diagonalize(&mut m.clone(), &mut None, &mut None, localized);
    if localized {
        for d in &mut diagonal {
            *d = d.divide_local_unit(d.local_valuation());
        }
    }
    chain_fix(&mut diagonal);
    for d in &mut diagonal {
        let u = d.canonical_unit();
        let (canon, _) = d.div_rem(&u);
        *d = canon;
    }
    let rank = diagonal.len();
    SnfResult {
        diagonal,
        rank,
        left: None,
        right: None,
    }
}

pub fn smith_normal_form_with_transforms<T: SnfEntry>(m: &Mat<T>) -> SnfResult<T> {
    snf_impl(m, true)
}

fn gcd_entry<T: SnfEntry>(a: &T, b: &T) -> T {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r;
    }
    a
}

/// Replace pairs `(d_i, d_j)` by `(gcd, lcm)` until each entry divides
/// the next.
fn chain_fix<T: SnfEntry>(diag: &mut [T]) {
    let r = diag.len();
    loop {
        let mut changed = false;
        for i in 0..r {
            for j in i + 1..r {
                let (_, rem) = diag[j].div_rem(&diag[i]);
                if rem.is_zero() {
                    continue;
                }
                let g = gcd_entry(&diag[i], &diag[j]);
                let (cofactor, _) = diag[i].div_rem(&g);
                let l = cofactor.mul(&diag[j]);
                diag[i] = g;
                diag[j] = l;
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Row/column reduction to diagonal form; returns the nonzero diagonal
/// entries. Transform accumulators are updated when present. In localized
/// mode, common variable powers are divided out of rows and columns
/// between pivots (callers must not request transforms then).
fn diagonalize<T: SnfEntry>(
    a: &mut Mat<T>,
    left: &mut Option<Mat<T>>,
    right: &mut Option<Mat<T>>,
    localized: bool,
) -> Vec<T> {
    let (nr, nc) = (a.nrows(), a.ncols());
    let n = nr.min(nc);
    let mut diagonal = Vec::new();
    for k in 0..n {
        if localized {
            strip_units(a, k);
        }
        // pivot: minimal size, then least fill-in
        let mut row_nnz = vec![0usize; nr];
        let mut col_nnz = vec![0usize; nc];
        for i in k..nr {
            for j in k..nc {
                if !a[(i, j)].is_zero() {
                    row_nnz[i] += 1;
                    col_nnz[j] += 1;
                }
            }
        }
        let mut pivot: Option<(usize, usize, T::Size, usize)> = None;
        for i in k..nr {
            for j in k..nc {
                if a[(i, j)].is_zero() {
                    continue;
                }
                let size = a[(i, j)].size();
                let fill = (row_nnz[i] - 1) * (col_nnz[j] - 1);
                let better = match &pivot {
                    None => true,
                    Some((_, _, s, f)) => (&size, &fill) < (s, f),
                };
                if better {
                    pivot = Some((i, j, size, fill));
                }
            }
        }
        let Some((pi, pj, _, _)) = pivot else { break };
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);
        if let Some(l) = left.as_mut() {
            l.swap_rows(k, pi);
        }
        if let Some(r) = right.as_mut() {
            r.swap_cols(k, pj);
        }

        loop {
            for i in k + 1..nr {
                while !a[(i, k)].is_zero() {
                    let (q, _) = a[(i, k)].div_rem(&a[(k, k)]);
                    row_sub(a, i, k, &q, k);
                    if let Some(l) = left.as_mut() {
                        row_sub(l, i, k, &q, 0);
                    }
                    if !a[(i, k)].is_zero() && a[(i, k)].size() < a[(k, k)].size() {
                        a.swap_rows(i, k);
                        if let Some(l) = left.as_mut() {
                            l.swap_rows(i, k);
                        }
                    }
                }
            }
            for j in k + 1..nc {
                while !a[(k, j)].is_zero() {
                    let (q, _) = a[(k, j)].div_rem(&a[(k, k)]);
                    col_sub(a, j, k, &q, k);
                    if let Some(r) = right.as_mut() {
                        col_sub(r, j, k, &q, 0);
                    }
                    if !a[(k, j)].is_zero() && a[(k, j)].size() < a[(k, k)].size() {
                        a.swap_cols(j, k);
                        if let Some(r) = right.as_mut() {
                            r.swap_cols(j, k);
                        }
                    }
                }
            }
            // column ops may have refilled the column; recheck
            if (k + 1..nr).all(|i| a[(i, k)].is_zero()) {
                break;
            }
        }
        diagonal.push(a[(k, k)].clone());
    }
    diagonal
}

/// Divide every row and then every column of the trailing submatrix by
/// its common local unit (a variable power); these are unit scalings of
/// the localized module and keep intermediate degrees down.
fn strip_units<T: SnfEntry>(a: &mut Mat<T>, from: usize) {
    let (nr, nc) = (a.nrows(), a.ncols());
    for i in from..nr {
        let v = (from..nc)
            .filter(|&j| !a[(i, j)].is_zero())
            .map(|j| a[(i, j)].local_valuation())
            .min()
            .unwrap_or(0);
        if v > 0 {
            for j in from..nc {
                if !a[(i, j)].is_zero() {
                    a[(i, j)] = a[(i, j)].divide_local_unit(v);
                }
            }
        }
    }
    for j in from..nc {
        let v = (from..nr)
            .filter(|&i| !a[(i, j)].is_zero())
            .map(|i| a[(i, j)].local_valuation())
            .min()
            .unwrap_or(0);
        if v > 0 {
            for i in from..nr {
                if !a[(i, j)].is_zero() {
                    a[(i, j)] = a[(i, j)].divide_local_unit(v);
                }
            }
        }
    }
}

fn snf_impl<T: SnfEntry>(m: &Mat<T>, transforms: bool) -> SnfResult<T> {
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut a = m.clone();
    let zero = if nr * nc > 0 {
        a[(0, 0)].zero_like()
    } else {
        return SnfResult {
            diagonal: vec![],
            rank: 0,
            left: None,
            right: None,
        };
    };
    let one = zero.one_like();
    let mut left = transforms.then(|| identity(nr, Some(&one)));
    let mut right = transforms.then(|| identity(nc, Some(&one)));

    let n = nr.min(nc);
    let mut k = 0;
    while k < n {
        // pivot: minimal-size nonzero entry of the trailing submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..nr {
            for j in k..nc {
                if !a[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[(i, j)].size() < a[(pi, pj)].size())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);
        if let Some(l) = &mut left {
            l.swap_rows(k, pi);
        }
        if let Some(r) = &mut right {
            r.swap_cols(k, pj);
        }

        // clear row and column k; failed divisions swap a smaller
        // remainder into the pivot and retry
        'reduce: loop {
            for i in k + 1..nr {
                while !a[(i, k)].is_zero() {
                    let (q, _) = a[(i, k)].div_rem(&a[(k, k)]);
                    row_sub(&mut a, i, k, &q, k);
                    if let Some(l) = &mut left {
                        row_sub_full(l, i, k, &q);
                    }
                    if !a[(i, k)].is_zero() && a[(i, k)].size() < a[(k, k)].size() {
                        a.swap_rows(i, k);
                        if let Some(l) = &mut left {
                            l.swap_rows(i, k);
                        }
                    }
                }
            }
            for j in k + 1..nc {
                while !a[(k, j)].is_zero() {
                    let (q, _) = a[(k, j)].div_rem(&a[(k, k)]);
                    col_sub(&mut a, j, k, &q, k);
                    if let Some(r) = &mut right {
                        col_sub_full(r, j, k, &q);
                    }
                    if !a[(k, j)].is_zero() && a[(k, j)].size() < a[(k, k)].size() {
                        a.swap_cols(j, k);
                        if let Some(r) = &mut right {
                            r.swap_cols(j, k);
                        }
                    }
                }
            }
            // column ops may have refilled the column; recheck
            if (k + 1..nr).any(|i| !a[(i, k)].is_zero()) {
                continue 'reduce;
            }

            // enforce divisibility: pivot must divide the whole submatrix
            let mut fixed = true;
            'scan: for i in k + 1..nr {
                for j in k + 1..nc {
                    let (_, r) = a[(i, j)].div_rem(&a[(k, k)]);
                    if !r.is_zero() {
                        // fold row i into row k and restart the reduction
                        for jj in 0..nc {
                            let sum = a[(k, jj)].add(&a[(i, jj)]);
                            a[(k, jj)] = sum;
                        }
                        if let Some(l) = &mut left {
                            for jj in 0..l.ncols() {
                                let sum = l[(k, jj)].add(&l[(i, jj)]);
                                l[(k, jj)] = sum;
                            }
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break 'reduce;
            }
        }
        k += 1;
    }

    // canonical associates on the diagonal
    let mut diagonal = Vec::new();
    for d in 0..n {
        if a[(d, d)].is_zero() {
            break;
        }
        let u = a[(d, d)].canonical_unit();
        let (canon, _) = a[(d, d)].div_rem(&u);
        if let Some(l) = &mut left {
            // dividing row d by the unit keeps left * m * right = diag
            for jj in 0..l.ncols() {
                let (q, _) = l[(d, jj)].div_rem(&u);
                l[(d, jj)] = q;
            }
        }
        a[(d, d)] = canon.clone();
        diagonal.push(canon);
    }
    let rank = diagonal.len();
    SnfResult {
        diagonal,
        rank,
        left,
        right,
    }
}

fn identity<T: SnfEntry>(n: usize, one: Option<&T>) -> Mat<T> {
    let one = one.expect("identity of an empty matrix type");
    let zero = one.zero_like();
    Mat::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
}

/// row_i -= q * row_k, starting from column `from`.
fn row_sub<T: SnfEntry>(a: &mut Mat<T>, i: usize, k: usize, q: &T, from: usize) {
    for j in from..a.ncols() {
        let t = q.mul(&a[(k, j)]);
        let v = a[(i, j)].sub(&t);
        a[(i, j)] = v;
    }
}

fn row_sub_full<T: SnfEntry>(a: &mut Mat<T>, i: usize, k: usize, q: &T) {
    row_sub(a, i, k, q, 0)
}

/// col_j -= q * col_k, starting from row `from`.
fn col_sub<T: SnfEntry>(a: &mut Mat<T>, j: usize, k: usize, q: &T, from: usize) {
    for i in from..a.nrows() {
        let t = q.mul(&a[(i, k)]);
        let v = a[(i, j)].sub(&t);
        a[(i, j)] = v;
    }
}

fn col_sub_full<T: SnfEntry>(a: &mut Mat<T>, j: usize, k: usize, q: &T) {
    col_sub(a, j, k, q, 0)
}

pub fn mat_mul<T: SnfEntry>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    assert_eq!(a.ncols(), b.nrows());
    let zero = a[(0, 0)].zero_like();
    Mat::from_fn(a.nrows(), b.ncols(), |i, j| {
        let mut acc = zero.clone();
        for k in 0..a.ncols() {
            acc = acc.add(&a[(i, k)].mul(&b[(k, j)]));
        }
        acc
    })
}
