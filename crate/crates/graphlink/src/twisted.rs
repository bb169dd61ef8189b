//! Twisted Alexander polynomials over `F_p[t^±1]` from a presentation, a
//! permutation representation, and an integral character.
//!
//! The representation sends generators to permutations, hence to 0/1
//! matrices; tensoring with `t^phi` gives matrices over the Laurent ring.
//! Applying that to the Fox derivatives of the relators yields a block
//! matrix whose Smith normal form carries the polynomial invariants.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::TwistedError;
use crate::laurent::{laurent_smith_normal_form, CoeffRing, FpPoly, LaurentPoly, Mat};
use crate::presentation::{fox_derivative, GroupPresentation, GroupRingElement, Word};

/// A permutation of `{1..k}` in one-line notation, stored 0-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(k: usize) -> Self {
        Perm((0..k).collect())
    }

    /// From 1-based one-line notation.
    pub fn from_one_line(images: &[usize]) -> Option<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &v in images {
            if v < 1 || v > k || seen[v - 1] {
                return None;
            }
            seen[v - 1] = true;
        }
        Some(Perm(images.iter().map(|&v| v - 1).collect()))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// Composition convention, fixed crate-wide: `(a * b)(i) = a(b(i))`,
    /// i.e. `b` acts first. Words evaluate left to right under this rule,
    /// and permutation matrices multiply in the same order.
    pub fn compose(&self, rhs: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), rhs.degree());
        Perm(rhs.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v + 1).collect()
    }

    /// Sorted cycle lengths, identity fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut lens = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.0[cur];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.one_line().iter().map(|v| v.to_string()).collect();
        write!(f, "({})", s.join(""))
    }
}

/// The 0/1 matrix of a permutation: column `i` has its 1 in row `sigma(i)`,
/// so matrices multiply in the composition order fixed above.
pub fn perm_matrix(sigma: &Perm, k: usize) -> Mat<u64> {
    assert_eq!(sigma.degree(), k);
    Mat::from_fn(k, k, |r, c| u64::from(sigma.apply(c) == r))
}

/// An assignment of permutations to generators.
#[derive(Clone, Debug, PartialEq)]
pub struct PermRep {
    degree: usize,
    images: BTreeMap<String, Perm>,
    wildcard: Option<Perm>,
}

impl PermRep {
    pub fn new(degree: usize) -> Self {
        PermRep {
            degree,
            images: BTreeMap::new(),
            wildcard: None,
        }
    }

    pub fn trivial(degree: usize) -> Self {
        let mut rep = PermRep::new(degree);
        rep.wildcard = Some(Perm::identity(degree));
        rep
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn insert(&mut self, name: &str, perm: Perm) {
        assert_eq!(perm.degree(), self.degree);
        self.images.insert(name.to_string(), perm);
    }

    pub fn image(&self, name: &str) -> Result<&Perm, TwistedError> {
        self.images
            .get(name)
            .or(self.wildcard.as_ref())
            .ok_or_else(|| TwistedError::MissingImage(name.to_string()))
    }

    pub fn named_images(&self) -> impl Iterator<Item = (&str, &Perm)> {
        self.images.iter().map(|(n, p)| (n.as_str(), p))
    }

    /// Parse the `.rep` text form: a `degree: k` header, then one
    /// `gen <name>: i1 .. ik` line per generator (1-based one-line
    /// notation). `gen *:` declares a default image.
    pub fn parse(text: &str) -> Result<PermRep, TwistedError> {
        let mut degree: Option<usize> = None;
        let mut rep: Option<PermRep> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let parse_err = |msg: String| TwistedError::Parse { line: lineno, msg };
            if let Some(rest) = line.strip_prefix("degree:") {
                let k: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| parse_err("bad degree".into()))?;
                if k == 0 {
                    return Err(parse_err("degree must be at least 1".into()));
                }
                degree = Some(k);
                rep = Some(PermRep::new(k));
            } else if let Some(rest) = line.strip_prefix("gen") {
                let k = degree.ok_or_else(|| parse_err("gen before degree:".into()))?;
                let rep = rep.as_mut().unwrap();
                let (name, imgs) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_err("expected 'gen <name>: images'".into()))?;
                let name = name.trim();
                let images: Vec<usize> = imgs
                    .split_whitespace()
                    .map(|w| w.parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| parse_err("images must be integers".into()))?;
                if images.len() != k {
                    return Err(parse_err(format!(
                        "expected {k} images, found {}",
                        images.len()
                    )));
                }
                let perm = Perm::from_one_line(&images)
                    .ok_or_else(|| parse_err("not a permutation".into()))?;
                if name == "*" {
                    rep.wildcard = Some(perm);
                } else {
                    rep.images.insert(name.to_string(), perm);
                }
            } else {
                return Err(parse_err(format!("unknown construct: {line}")));
            }
        }
        rep.ok_or(TwistedError::Parse {
            line: 0,
            msg: "missing degree: header".into(),
        })
    }

    /// Evaluate a word under the representation.
    pub fn eval(&self, w: &Word, g: &GroupPresentation) -> Result<Perm, TwistedError> {
        let mut acc = Perm::identity(self.degree);
        for l in &w.0 {
            let img = self.image(&g.generators[l.gen])?;
            let img = if l.inverse {
                img.inverse()
            } else {
                img.clone()
            };
            acc = acc.compose(&img);
        }
        Ok(acc)
    }

    /// True iff every relator evaluates to the identity permutation.
    pub fn respects(&self, g: &GroupPresentation) -> Result<bool, TwistedError> {
        for r in &g.relators {
            if !self.eval(r, g)?.is_identity() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A representation tensored with `t^phi` over a prime field: generators
/// map to `t^{phi(g)} P(g)` in `GL_k(F_p[t^±1])`.
#[derive(Clone, Debug)]
pub struct TensorRep<'a> {
    pub rep: &'a PermRep,
    /// Character value of each generator.
    pub char_values: Vec<i64>,
    pub prime: u64,
}

impl<'a> TensorRep<'a> {
    pub fn new(
        g: &GroupPresentation,
        rep: &'a PermRep,
        char_values: Vec<i64>,
        prime: u64,
    ) -> Result<Self, TwistedError> {
        assert_eq!(char_values.len(), g.num_generators());
        for (i, r) in g.relators.iter().enumerate() {
            let sums = r.exponent_sums(g.num_generators());
            let total: i64 = sums.iter().zip(&char_values).map(|(s, c)| s * c).sum();
            if total != 0 {
                return Err(TwistedError::CharacterNotBalanced(i));
            }
        }
        for name in &g.generators {
            rep.image(name)?;
        }
        Ok(TensorRep {
            rep,
            char_values,
            prime,
        })
    }

    /// `Phi(w) = (sigma, e)` with `sigma` the permutation image and `e`
    /// the character value; the matrix is `t^e P(sigma)`.
    pub fn eval_word(&self, w: &Word, g: &GroupPresentation) -> Result<(Perm, i64), TwistedError> {
        let mut acc = Perm::identity(self.rep.degree());
        let mut exp = 0i64;
        for l in &w.0 {
            let img = self.rep.image(&g.generators[l.gen])?;
            let img = if l.inverse {
                img.inverse()
            } else {
                img.clone()
            };
            acc = acc.compose(&img);
            exp += l.sign() * self.char_values[l.gen];
        }
        Ok((acc, exp))
    }
}

/// A `k x k` block over the Laurent ring, stored as exponent-coefficient
/// maps per entry.
type LaurentBlock = Vec<Vec<BTreeMap<i64, u64>>>;

fn empty_block(k: usize) -> LaurentBlock {
    vec![vec![BTreeMap::new(); k]; k]
}

/// Add `c * t^e * P(sigma)` into a block.
#[allow(clippy::needless_range_loop)] // the target row is a function of the column
fn accumulate(block: &mut LaurentBlock, sigma: &Perm, e: i64, c: i64, p: u64) {
    let c = c.rem_euclid(p as i64) as u64;
    if c == 0 {
        return;
    }
    for col in 0..sigma.degree() {
        let row = sigma.apply(col);
        let entry = &mut block[row][col];
        let slot = entry.entry(e).or_insert(0);
        *slot = (*slot + c) % p;
        if *slot == 0 {
            entry.remove(&e);
        }
    }
}

/// Evaluate `Phi` on a group-ring element, producing one block.
fn eval_group_ring(
    phi: &TensorRep,
    elem: &GroupRingElement,
    g: &GroupPresentation,
) -> Result<LaurentBlock, TwistedError> {
    let k = phi.rep.degree();
    let mut block = empty_block(k);
    for (w, c) in elem.terms() {
        let (sigma, e) = phi.eval_word(w, g)?;
        accumulate(&mut block, &sigma, e, c, phi.prime);
    }
    Ok(block)
}

/// The full `(m k) x (n k)` matrix of Fox derivative blocks
/// `Phi(dr_i / dx_j)` over the Laurent ring, as Laurent polynomials.
pub fn alexander_matrix(
    g: &GroupPresentation,
    phi: &TensorRep,
) -> Result<Mat<LaurentPoly>, TwistedError> {
    let k = phi.rep.degree();
    let (m, n) = (g.relators.len(), g.num_generators());
    let ring = CoeffRing::Fp(phi.prime);
    let zero = LaurentPoly::zero(ring, &["t"]);
    let mut out = Mat::filled(m * k, n * k, zero);
    for (i, r) in g.relators.iter().enumerate() {
        for j in 0..n {
            let block = eval_group_ring(phi, &fox_derivative(r, j), g)?;
            for (br, row) in block.iter().enumerate() {
                for (bc, entry) in row.iter().enumerate() {
                    if entry.is_empty() {
                        continue;
                    }
                    out[(i * k + br, j * k + bc)] = LaurentPoly::from_terms(
                        ring,
                        &["t"],
                        entry.iter().map(|(&e, &c)| (vec![e], c.into())),
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Is the polynomial (provably) monic, given only mod-p data?
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Monicity {
    /// The polynomial vanishes mod p, so its integral lift is not monic.
    No,
    /// Nonzero mod p; a single prime cannot certify monicness.
    UnknownAtPrime,
    /// Nonzero mod every tested prime; deciding monicness would require
    /// integer coefficients.
    WouldRequireIntegerCoefficients,
}

impl fmt::Display for Monicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monicity::No => write!(f, "not monic"),
            Monicity::UnknownAtPrime => write!(f, "unknown at this prime"),
            Monicity::WouldRequireIntegerCoefficients => {
                write!(f, "would require integer coefficients")
            }
        }
    }
}

/// Outcome of a twisted Alexander computation at one prime.
#[derive(Clone, Debug)]
pub struct TwistedResult {
    pub prime: u64,
    /// Which generator's block column was deleted.
    pub deleted_generator: usize,
    /// Free rank of the presented module over `F_p[t^±1]`.
    pub free_rank: usize,
    /// Nonunit invariant factors, normalized, each dividing the next.
    pub torsion: Vec<LaurentPoly>,
    /// Order of the module: 0 when the free rank is positive, otherwise
    /// the product of the invariant factors.
    pub delta: LaurentPoly,
    /// Product of the torsion invariants regardless of rank.
    pub delta_tilde: LaurentPoly,
    /// Order of the degree-0 module.
    pub delta_zero: LaurentPoly,
    pub monic: Monicity,
}

/// Shared setup for repeated twisted computations over one presentation
/// and character: Fox derivatives are computed once.
pub struct TwistedSetup<'g> {
    pub group: &'g GroupPresentation,
    pub char_values: Vec<i64>,
    pub deleted: usize,
    derivatives: Vec<Vec<GroupRingElement>>,
}

impl<'g> TwistedSetup<'g> {
    /// `deleted` defaults to the first generator with nonzero character.
    pub fn new(
        group: &'g GroupPresentation,
        char_values: Vec<i64>,
        deleted: Option<usize>,
    ) -> Result<Self, TwistedError> {
        assert_eq!(char_values.len(), group.num_generators());
        let deleted = match deleted {
            Some(j) => {
                if char_values[j] == 0 {
                    return Err(TwistedError::NoAdmissibleColumn);
                }
                j
            }
            None => char_values
                .iter()
                .position(|&c| c != 0)
                .ok_or(TwistedError::NoAdmissibleColumn)?,
        };
        let derivatives = group
            .relators
            .iter()
            .map(|r| {
                (0..group.num_generators())
                    .map(|j| fox_derivative(r, j))
                    .collect()
            })
            .collect();
        Ok(TwistedSetup {
            group,
            char_values,
            deleted,
            derivatives,
        })
    }

    /// The presentation matrix over `F_p[t]`: Fox derivative blocks with
    /// the deleted generator's column removed, each row scaled by the
    /// Laurent unit clearing its negative exponents.
    pub fn presentation_matrix(
        &self,
        rep: &PermRep,
        prime: u64,
    ) -> Result<Mat<FpPoly>, TwistedError> {
        let phi = TensorRep::new(self.group, rep, self.char_values.clone(), prime)?;
        let k = rep.degree();
        let (m, n) = (self.group.relators.len(), self.group.num_generators());

        // blocks with column `deleted` skipped, as sparse exponent maps
        let cols: Vec<usize> = (0..n).filter(|&j| j != self.deleted).collect();
        let mut rows: Vec<Vec<BTreeMap<i64, u64>>> =
            vec![vec![BTreeMap::new(); cols.len() * k]; m * k];
        for (i, derivs) in self.derivatives.iter().enumerate() {
            for (jc, &j) in cols.iter().enumerate() {
                let block = eval_group_ring(&phi, &derivs[j], self.group)?;
                for (br, brow) in block.into_iter().enumerate() {
                    for (bc, entry) in brow.into_iter().enumerate() {
                        if !entry.is_empty() {
                            rows[i * k + br][jc * k + bc] = entry;
                        }
                    }
                }
            }
        }
        Ok(Mat::from_rows(dense_fp_rows(rows, prime)))
    }

    /// Run the computation for one representation and prime.
    pub fn compute(&self, rep: &PermRep, prime: u64) -> Result<TwistedResult, TwistedError> {
        let phi = TensorRep::new(self.group, rep, self.char_values.clone(), prime)?;
        let mat = self.presentation_matrix(rep, prime)?;
        let total_cols = mat.ncols();

        let snf = laurent_smith_normal_form(&mat);
        let free_rank = total_cols - snf.rank;

        let torsion: Vec<LaurentPoly> = snf
            .diagonal
            .iter()
            .map(|d| d.strip_valuation().monic())
            .filter(|d| !d.is_constant())
            .map(|d| LaurentPoly::from_fp_dense(&d, "t").normalized())
            .collect();

        let one = LaurentPoly::one(CoeffRing::Fp(prime), &["t"]);
        let delta_tilde = torsion
            .iter()
            .fold(one.clone(), |acc, t| (&acc * t).normalized());
        let delta = if free_rank > 0 {
            LaurentPoly::zero(CoeffRing::Fp(prime), &["t"])
        } else {
            delta_tilde.clone()
        };
        let delta_zero = delta_zero(self.group, &phi)?;
        let monic = if delta.is_zero() {
            Monicity::No
        } else {
            Monicity::UnknownAtPrime
        };

        Ok(TwistedResult {
            prime,
            deleted_generator: self.deleted,
            free_rank,
            torsion,
            delta,
            delta_tilde,
            delta_zero,
            monic,
        })
    }
}

/// Twisted Alexander computation at one prime. `deleted` picks the block
/// column to remove; it must have nonzero character.
pub fn twisted_alexander(
    g: &GroupPresentation,
    rep: &PermRep,
    char_values: &[i64],
    prime: u64,
    deleted: Option<usize>,
) -> Result<TwistedResult, TwistedError> {
    TwistedSetup::new(g, char_values.to_vec(), deleted)?.compute(rep, prime)
}

/// Flatten sparse Laurent rows to dense `F_p[t]` rows, scaling each row
/// by the monomial unit that clears its negative exponents.
fn dense_fp_rows(rows: Vec<Vec<BTreeMap<i64, u64>>>, prime: u64) -> Vec<Vec<FpPoly>> {
    rows.into_iter()
        .map(|row| {
            let min = row
                .iter()
                .filter_map(|e| e.keys().next().copied())
                .min()
                .unwrap_or(0);
            row.into_iter()
                .map(|entry| {
                    let mut coeffs = Vec::new();
                    for (&e, &c) in &entry {
                        let idx = (e - min) as usize;
                        if coeffs.len() <= idx {
                            coeffs.resize(idx + 1, 0);
                        }
                        coeffs[idx] = c;
                    }
                    FpPoly::new(prime, coeffs)
                })
                .collect()
        })
        .collect()
}

/// Order of the degree-0 twisted module: the Smith normal form of the
/// stacked blocks `Phi(x_i) - I` over all generators.
pub fn delta_zero(g: &GroupPresentation, phi: &TensorRep) -> Result<LaurentPoly, TwistedError> {
    let k = phi.rep.degree();
    let n = g.num_generators();
    let prime = phi.prime;
    let mut rows: Vec<Vec<BTreeMap<i64, u64>>> = vec![vec![BTreeMap::new(); k]; n * k];
    for j in 0..n {
        let w = Word(vec![crate::presentation::Letter::new(j)]);
        let (sigma, e) = phi.eval_word(&w, g)?;
        let mut block = empty_block(k);
        accumulate(&mut block, &sigma, e, 1, prime);
        accumulate(&mut block, &Perm::identity(k), 0, -1, prime);
        for (br, brow) in block.into_iter().enumerate() {
            for (bc, entry) in brow.into_iter().enumerate() {
                rows[j * k + br][bc] = entry;
            }
        }
    }
    let mat = Mat::from_rows(dense_fp_rows(rows, prime));
    let snf = laurent_smith_normal_form(&mat);
    if snf.rank < k {
        return Ok(LaurentPoly::zero(CoeffRing::Fp(prime), &["t"]));
    }
    let one = LaurentPoly::one(CoeffRing::Fp(prime), &["t"]);
    Ok(snf
        .diagonal
        .iter()
        .map(|d| d.strip_valuation().monic())
        .fold(one, |acc, d| {
            (&acc * &LaurentPoly::from_fp_dense(&d, "t")).normalized()
        }))
}

/// The degree/monicness test of the fibering criterion: a fibered class
/// forces `delta` monic and
/// `deg(delta) = k * norm + deg(delta_0) + deg(delta_2)`.
#[derive(Clone, Debug)]
pub struct FkReport {
    pub monic: Monicity,
    pub degree_delta: Option<i64>,
    pub degree_delta_zero: i64,
    /// `deg(delta_2)`, taken to be 0 for link exteriors with boundary.
    /// The assumption is recorded here rather than applied silently.
    pub degree_delta_two_assumed: i64,
    pub rhs: i64,
    pub obstructed: bool,
}

pub fn fk_degree_test(res: &TwistedResult, k: usize, norm: i64) -> FkReport {
    let degree_delta_two_assumed = 0i64;
    let degree_delta_zero = res.delta_zero.degree_span(0).unwrap_or(0);
    let rhs = k as i64 * norm + degree_delta_zero + degree_delta_two_assumed;
    match res.delta.degree_span(0) {
        Err(_) => FkReport {
            monic: Monicity::No,
            degree_delta: None,
            degree_delta_zero,
            degree_delta_two_assumed,
            rhs,
            obstructed: true,
        },
        Ok(deg) => FkReport {
            monic: res.monic,
            degree_delta: Some(deg),
            degree_delta_zero,
            degree_delta_two_assumed,
            rhs,
            obstructed: deg != rhs,
        },
    }
}

/// Lower bound for the Thurston norm from the secondary polynomial:
/// `floor(deg / k) - 1`. The class must be dual to a meridian; that is a
/// topological hypothesis on the caller's side and is not checked here.
pub fn tilde_norm_bound(delta_tilde: &LaurentPoly, k: usize) -> Result<i64, TwistedError> {
    let deg = delta_tilde.degree_span(0)?;
    Ok(deg.div_euclid(k as i64) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::mat_mul;
    use num_bigint::BigInt;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const PI1_K: &str = include_str!("../fixtures/groups/pi1_k.grp");
    const PI1_L_ALPHA: &str = include_str!("../fixtures/groups/pi1_l_alpha.grp");
    const PI1_L_BETA: &str = include_str!("../fixtures/groups/pi1_l_beta.grp");
    const TREFOIL: &str = include_str!("../fixtures/groups/trefoil.grp");
    const ALPHA_K: &str = include_str!("../fixtures/reps/alpha_k.rep");
    const ALPHA1: &str = include_str!("../fixtures/reps/alpha1_l_alpha.rep");
    const ALPHA2: &str = include_str!("../fixtures/reps/alpha2_l_alpha.rep");

    fn group(text: &str) -> GroupPresentation {
        GroupPresentation::parse(text).unwrap()
    }

    fn char_for(g: &GroupPresentation, phi: &[i64]) -> Vec<i64> {
        g.abelianize().unwrap().class_as_char(phi).unwrap()
    }

    #[test]
    fn perm_basics() {
        let id = Perm::from_one_line(&[1, 2, 3, 4, 5]).unwrap();
        assert!(id.is_identity());
        assert!(Perm::from_one_line(&[1, 1, 3]).is_none());
        let s = Perm::from_one_line(&[2, 1, 3, 4, 5]).unwrap();
        assert_eq!(s.compose(&s), Perm::identity(5));
    }

    #[test]
    fn perm_matrix_shapes() {
        let id = Perm::identity(5);
        let m = perm_matrix(&id, 5);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(m[(i, j)], u64::from(i == j));
            }
        }
        let s = Perm::from_one_line(&[2, 1, 3, 4, 5]).unwrap();
        let m = perm_matrix(&s, 5);
        assert_eq!(m[(1, 0)], 1);
        assert_eq!(m[(0, 1)], 1);
        assert_eq!(m[(2, 2)], 1);
        assert_eq!(m[(0, 0)], 0);
    }

    #[test]
    fn perm_matrix_multiplicative() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..50 {
            let mut a: Vec<usize> = (1..=5).collect();
            let mut b: Vec<usize> = (1..=5).collect();
            for i in (1..5).rev() {
                a.swap(i, rng.gen_range(0..=i));
                b.swap(i, rng.gen_range(0..=i));
            }
            let pa = Perm::from_one_line(&a).unwrap();
            let pb = Perm::from_one_line(&b).unwrap();
            let lhs = perm_matrix(&pa.compose(&pb), 5).map(|&v| BigInt::from(v));
            let rhs = mat_mul(
                &perm_matrix(&pa, 5).map(|&v| BigInt::from(v)),
                &perm_matrix(&pb, 5).map(|&v| BigInt::from(v)),
            );
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn braid_pair_is_homomorphism() {
        let g = group(TREFOIL);
        let mut rep = PermRep::new(3);
        rep.insert("x", Perm::from_one_line(&[2, 1, 3]).unwrap());
        rep.insert("y", Perm::from_one_line(&[3, 2, 1]).unwrap());
        assert!(rep.respects(&g).unwrap());
        // and a non-homomorphism is rejected
        let mut bad = PermRep::new(3);
        bad.insert("x", Perm::from_one_line(&[2, 1, 3]).unwrap());
        bad.insert("y", Perm::from_one_line(&[2, 3, 1]).unwrap());
        assert!(!bad.respects(&g).unwrap());
    }

    #[test]
    fn trivial_rep_respects_everything() {
        for text in [PI1_K, PI1_L_ALPHA, PI1_L_BETA, TREFOIL] {
            let g = group(text);
            assert!(PermRep::trivial(1).respects(&g).unwrap());
        }
    }

    #[test]
    fn respects_is_invariant_under_relator_rewording() {
        // free reduction and cyclic permutation of a relator do not change
        // the homomorphism check
        let braid = |r: &str| GroupPresentation::parse(&format!("gens: x y\nrel: {r}\n")).unwrap();
        let variants = [
            "x y x y^-1 x^-1 y^-1",
            "x y x x^-1 x y^-1 x^-1 y^-1", // unreduced
            "y x y^-1 x^-1 y^-1 x",        // cyclic shift
            "x y^-1 x^-1 y^-1 x y",        // another shift
        ];
        let mut good = PermRep::new(3);
        good.insert("x", Perm::from_one_line(&[2, 1, 3]).unwrap());
        good.insert("y", Perm::from_one_line(&[3, 2, 1]).unwrap());
        let mut bad = PermRep::new(3);
        bad.insert("x", Perm::from_one_line(&[2, 1, 3]).unwrap());
        bad.insert("y", Perm::from_one_line(&[2, 3, 1]).unwrap());
        for r in variants {
            assert!(good.respects(&braid(r)).unwrap(), "{r}");
            assert!(!bad.respects(&braid(r)).unwrap(), "{r}");
        }
    }

    #[test]
    fn wirtinger_trefoil_equivalent_to_two_generator_form() {
        // the same dihedral images make both presentations work: the
        // two-generator form takes x -> (213), y -> (321); the arc form
        // forces z = y x y^-1 -> (132)
        use crate::presentation::{wirtinger, Crossing};
        let crossings = [
            Crossing::new("y", "x", "z", 1),
            Crossing::new("z", "y", "x", 1),
            Crossing::new("x", "z", "y", 1),
        ];
        let arcs = wirtinger(&crossings, &[]).unwrap();
        let two_gen = group(TREFOIL);

        let x = Perm::from_one_line(&[2, 1, 3]).unwrap();
        let y = Perm::from_one_line(&[3, 2, 1]).unwrap();
        let z = y.compose(&x).compose(&y.inverse());

        let mut arc_rep = PermRep::new(3);
        arc_rep.insert("x", x.clone());
        arc_rep.insert("y", y.clone());
        arc_rep.insert("z", z);
        assert!(arc_rep.respects(&arcs).unwrap());

        let mut short_rep = PermRep::new(3);
        short_rep.insert("x", x);
        short_rep.insert("y", y);
        assert!(short_rep.respects(&two_gen).unwrap());
    }

    #[test]
    fn wirtinger_necklace_equivalent_to_commuting_form() {
        use crate::presentation::{wirtinger, Crossing};
        let crossings = [
            Crossing::new("s", "m", "n", 1),
            Crossing::new("t", "n", "m", 1),
            Crossing::new("n", "s", "s", 1),
            Crossing::new("m", "t", "t", 1),
        ];
        let arcs = wirtinger(&crossings, &[]).unwrap();
        let simplified = group(include_str!("../fixtures/groups/necklace.grp"));

        // commuting images; the arc m identifies with n after splicing
        let sigma = Perm::from_one_line(&[2, 1, 3]).unwrap();
        let tau = Perm::from_one_line(&[2, 1, 3]).unwrap();
        let rho = Perm::identity(3);

        let mut arc_rep = PermRep::new(3);
        arc_rep.insert("n", sigma.clone());
        arc_rep.insert("m", sigma.clone());
        arc_rep.insert("s", tau.clone());
        arc_rep.insert("t", rho.clone());
        assert!(arc_rep.respects(&arcs).unwrap());

        let mut short_rep = PermRep::new(3);
        short_rep.insert("n", sigma);
        short_rep.insert("s", tau);
        short_rep.insert("t", rho);
        assert!(short_rep.respects(&simplified).unwrap());
    }

    #[test]
    fn fixture_rep_respects_pi1_k() {
        let g = group(PI1_K);
        let rep = PermRep::parse(ALPHA_K).unwrap();
        assert!(rep.respects(&g).unwrap());
    }

    #[test]
    fn fixture_reps_respect_pi1_l_alpha() {
        let g = group(PI1_L_ALPHA);
        for text in [ALPHA1, ALPHA2] {
            let rep = PermRep::parse(text).unwrap();
            assert!(rep.respects(&g).unwrap());
        }
    }

    #[test]
    fn derived_images_consistent() {
        // the stored images for a and n match a = s t and n = x
        let rep = PermRep::parse(ALPHA_K).unwrap();
        let a = rep.image("a").unwrap().clone();
        let n = rep.image("n").unwrap().clone();
        let x = rep.image("x").unwrap();
        let s = rep.image("s").unwrap();
        let t = rep.image("t").unwrap();
        assert_eq!(&n, x);
        assert_eq!(a, s.compose(t));
    }

    #[test]
    fn rep_multiplicativity_on_random_words() {
        // 100 random word pairs per fixture representation
        let cases = [
            (PI1_K, ALPHA_K, vec![1]),
            (PI1_L_ALPHA, ALPHA1, vec![0, 1]),
            (PI1_L_ALPHA, ALPHA2, vec![1, -1]),
        ];
        let mut rng = StdRng::seed_from_u64(23);
        for (grp_text, rep_text, class) in cases {
            let g = group(grp_text);
            let rep = PermRep::parse(rep_text).unwrap();
            let chi = g.abelianize().unwrap().class_as_char(&class).unwrap();
            let phi = TensorRep::new(&g, &rep, chi, 5).unwrap();
            let n = g.num_generators();
            for _ in 0..100 {
                let rand_word = |rng: &mut StdRng| {
                    crate::presentation::Word(
                        (0..rng.gen_range(0..12))
                            .map(|_| crate::presentation::Letter {
                                gen: rng.gen_range(0..n),
                                inverse: rng.gen_bool(0.5),
                            })
                            .collect(),
                    )
                };
                let u = rand_word(&mut rng);
                let v = rand_word(&mut rng);
                let (pu, eu) = phi.eval_word(&u, &g).unwrap();
                let (pv, ev) = phi.eval_word(&v, &g).unwrap();
                let (puv, euv) = phi.eval_word(&u.concat(&v), &g).unwrap();
                assert_eq!(puv, pu.compose(&pv));
                assert_eq!(euv, eu + ev);
            }
        }
    }

    #[test]
    fn alexander_matrix_dimensions() {
        let g = group(PI1_K);
        let rep = PermRep::parse(ALPHA_K).unwrap();
        let chi = char_for(&g, &[1]);
        let phi = TensorRep::new(&g, &rep, chi, 5).unwrap();
        let m = alexander_matrix(&g, &phi).unwrap();
        assert_eq!(m.nrows(), 6 * 5);
        assert_eq!(m.ncols(), 5 * 5);
    }

    #[test]
    fn commutator_blocks_vanish_under_trivial_tensor() {
        // with the trivial representation and zero character, blocks of
        // commutator relators are zero
        let g = group("gens: n s\nrel: n s = s n\n");
        let rep = PermRep::trivial(1);
        let phi = TensorRep::new(&g, &rep, vec![0, 0], 7).unwrap();
        let m = alexander_matrix(&g, &phi).unwrap();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                assert!(m[(i, j)].is_zero());
            }
        }
    }

    #[test]
    fn trefoil_trivial_rep_delta() {
        let g = group(TREFOIL);
        let rep = PermRep::trivial(1);
        let chi = char_for(&g, &[1]);
        assert_eq!(chi, vec![1, 1]);
        for p in [5u64, 7, 13] {
            let res = twisted_alexander(&g, &rep, &chi, p, None).unwrap();
            assert_eq!(res.free_rank, 0);
            let expected = LaurentPoly::parse_in("1 - t + t^2", CoeffRing::Fp(p), &["t"]).unwrap();
            assert!(res.delta.eq_up_to_unit(&expected), "p={p}: {}", res.delta);
            assert!(res.delta_tilde.eq_up_to_unit(&expected));
            // delta_zero = gcd(t-1, t-1) = t-1
            let tm1 = LaurentPoly::parse_in("t - 1", CoeffRing::Fp(p), &["t"]).unwrap();
            assert!(res.delta_zero.eq_up_to_unit(&tm1));
        }
    }

    #[test]
    fn trefoil_column_deletion_independent() {
        let g = group(TREFOIL);
        let rep = PermRep::trivial(1);
        let chi = char_for(&g, &[1]);
        let a = twisted_alexander(&g, &rep, &chi, 7, Some(0)).unwrap();
        let b = twisted_alexander(&g, &rep, &chi, 7, Some(1)).unwrap();
        assert!(a.delta.eq_up_to_unit(&b.delta));
    }

    #[test]
    fn trefoil_fk_test_passes() {
        let g = group(TREFOIL);
        let rep = PermRep::trivial(1);
        let chi = char_for(&g, &[1]);
        let res = twisted_alexander(&g, &rep, &chi, 7, None).unwrap();
        let report = fk_degree_test(&res, 1, 1);
        assert_eq!(report.degree_delta, Some(2));
        assert_eq!(report.degree_delta_zero, 1);
        assert_eq!(report.rhs, 2);
        assert!(!report.obstructed);
    }

    #[test]
    fn k_twisted_delta_vanishes_mod_5() {
        let g = group(PI1_K);
        let rep = PermRep::parse(ALPHA_K).unwrap();
        let chi = char_for(&g, &[1]);
        let res = twisted_alexander(&g, &rep, &chi, 5, None).unwrap();
        assert!(res.delta.is_zero(), "free rank {}", res.free_rank);
        assert_eq!(res.monic, Monicity::No);
        let report = fk_degree_test(&res, 5, 1);
        assert!(report.obstructed);
    }

    #[test]
    fn k_ordinary_delta_mod_p_matches_vertex_product() {
        let g = group(PI1_K);
        let rep = PermRep::trivial(1);
        let chi = char_for(&g, &[1]);
        for p in [5u64, 7, 13] {
            let res = twisted_alexander(&g, &rep, &chi, p, None).unwrap();
            let expected = LaurentPoly::parse_in("1 - t + t^2", CoeffRing::Fp(p), &["t"]).unwrap();
            assert!(res.delta.eq_up_to_unit(&expected), "p={p}: {}", res.delta);
        }
    }

    #[test]
    fn l_beta_tilde_polynomial() {
        let g = group(PI1_L_BETA);
        let rep = PermRep::trivial(1);
        let chi = char_for(&g, &[0, 1]);
        let res = twisted_alexander(&g, &rep, &chi, 13, None).unwrap();
        // the ordinary polynomial vanishes, the secondary one does not
        assert!(res.delta.is_zero());
        let expected = LaurentPoly::parse_in("1 - t + t^2", CoeffRing::Fp(13), &["t"]).unwrap();
        assert!(
            res.delta_tilde.eq_up_to_unit(&expected),
            "got {}",
            res.delta_tilde
        );
        assert_eq!(tilde_norm_bound(&res.delta_tilde, 1).unwrap(), 1);
    }

    #[test]
    fn l_beta_column_deletion_independent() {
        let g = group(PI1_L_BETA);
        let rep = PermRep::trivial(1);
        let chi = char_for(&g, &[0, 1]);
        let admissible: Vec<usize> = chi
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, _)| j)
            .collect();
        assert!(admissible.len() > 1);
        let results: Vec<TwistedResult> = admissible
            .iter()
            .map(|&j| twisted_alexander(&g, &rep, &chi, 13, Some(j)).unwrap())
            .collect();
        for r in &results[1..] {
            assert_eq!(r.delta.is_zero(), results[0].delta.is_zero());
            assert!(r.delta_tilde.eq_up_to_unit(&results[0].delta_tilde));
        }
    }

    #[test]
    fn tilde_bound_examples() {
        let f13 = CoeffRing::Fp(13);
        let q = LaurentPoly::parse_in("1 - t + t^2", f13, &["t"]).unwrap();
        assert_eq!(tilde_norm_bound(&q, 1).unwrap(), 1);
        let c = LaurentPoly::one(f13, &["t"]);
        assert_eq!(tilde_norm_bound(&c, 1).unwrap(), -1);
        let deg10 = LaurentPoly::parse_in("t^10 + 1", f13, &["t"]).unwrap();
        assert_eq!(tilde_norm_bound(&deg10, 5).unwrap(), 1);
        let zero = LaurentPoly::zero(f13, &["t"]);
        assert!(tilde_norm_bound(&zero, 1).is_err());
    }

    #[test]
    fn rejects_unbalanced_character() {
        let g = group(TREFOIL);
        let rep = PermRep::trivial(1);
        // x and y are conjugate, so a character must weight them equally
        assert!(matches!(
            TensorRep::new(&g, &rep, vec![1, 2], 7),
            Err(TwistedError::CharacterNotBalanced(_))
        ));
    }

    #[test]
    fn rejects_zero_character() {
        let g = group(TREFOIL);
        assert!(matches!(
            twisted_alexander(&g, &PermRep::trivial(1), &[0, 0], 7, None),
            Err(TwistedError::NoAdmissibleColumn)
        ));
    }

    #[test]
    fn missing_image_detected() {
        let g = group(TREFOIL);
        let mut rep = PermRep::new(2);
        rep.insert("x", Perm::identity(2));
        assert!(matches!(
            twisted_alexander(&g, &rep, &[1, 1], 7, None),
            Err(TwistedError::MissingImage(_))
        ));
    }
}
