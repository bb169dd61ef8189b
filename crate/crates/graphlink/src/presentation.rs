//! Finitely presented groups: parsing, free reduction, Fox derivatives,
//! abelianization, and Wirtinger presentations from crossing data.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::GroupError;
use crate::laurent::{smith_normal_form_with_transforms, Mat};

/// One letter of a word: a generator index and an exponent sign.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A word in the free group, a sequence of signed generator references.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.0.extend_from_slice(&other.0);
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Cancel adjacent inverse pairs until none remain. Idempotent.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match stack.last() {
                Some(&top) if top.gen == l.gen && top.inverse != l.inverse => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word(stack)
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, num_gens: usize) -> Vec<i64> {
        let mut sums = vec![0i64; num_gens];
        for l in &self.0 {
            sums[l.gen] += l.sign();
        }
        sums
    }

    /// Render with the given generator names, e.g. `x y^-1 x`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for l in &self.word.0 {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", self.names[l.gen])?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// An element of the integral group ring of the free group; keys are
/// freely reduced words, values are nonzero integers.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        GroupRingElement::default()
    }

    pub fn one() -> Self {
        let mut e = GroupRingElement::default();
        e.add_term(Word::empty(), 1);
        e
    }

    pub fn from_word(w: Word) -> Self {
        let mut e = GroupRingElement::default();
        e.add_term(w, 1);
        e
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        let w = w.free_reduce();
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = GroupRingElement::zero();
        for (u, a) in self.terms() {
            for (v, b) in rhs.terms() {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }

    /// Left-multiply every term by a word.
    pub fn translate(&self, w: &Word) -> Self {
        let mut out = GroupRingElement::zero();
        for (u, c) in self.terms() {
            out.add_term(w.concat(u), c);
        }
        out
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> GroupRingDisplay<'a> {
        GroupRingDisplay { elem: self, names }
    }
}

pub struct GroupRingDisplay<'a> {
    elem: &'a GroupRingElement,
    names: &'a [String],
}

impl fmt::Display for GroupRingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elem.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.elem.terms() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", w.display(self.names))?;
            } else {
                write!(f, "{mag} {}", w.display(self.names))?;
            }
        }
        Ok(())
    }
}

/// Fox derivative of a word with respect to a generator, in the group
/// ring of the free group: `d(x)/dx = 1`, `d(x^-1)/dx = -x^-1`, and
/// `d(uv)/dx = du/dx + u dv/dx`.
pub fn fox_derivative(w: &Word, gen: usize) -> GroupRingElement {
    let mut result = GroupRingElement::zero();
    let mut prefix = Word::empty();
    for &l in &w.0 {
        if l.gen == gen {
            if !l.inverse {
                result.add_term(prefix.clone(), 1);
                prefix.push(l);
            } else {
                prefix.push(l);
                result.add_term(prefix.clone(), -1);
            }
        } else {
            prefix.push(l);
        }
    }
    result
}

/// A finitely presented group: ordered generators, relator words, and an
/// optional declared basis of the free abelianization (a list of
/// generators whose images form a basis of `H_1` modulo torsion).
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub class_basis: Option<Vec<String>>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Self {
        GroupPresentation {
            generators,
            relators,
            class_basis: None,
        }
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, GroupError> {
        self.generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| GroupError::UnknownGenerator(name.to_string()))
    }

    /// Parse the `.grp` text form:
    ///
    /// ```text
    /// gens: x y s t b
    /// h1basis: t          # optional
    /// rel: x y x = y x y
    /// rel: s = x^-1 y x^2 y x^-3
    /// ```
    ///
    /// Words are whitespace-separated tokens `name` or `name^exp`; a token
    /// made of single-letter generators may be written without spaces,
    /// with uppercase as the inverse (`xyxY` = `x y x y^-1`).
    pub fn parse(text: &str) -> Result<GroupPresentation, GroupError> {
        let mut generators: Vec<String> = Vec::new();
        let mut relators = Vec::new();
        let mut class_basis = None;
        let mut seen_gens = false;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let parse_err = |msg: String| GroupError::Parse { line: lineno, msg };
            if let Some(rest) = line.strip_prefix("gens:") {
                if seen_gens {
                    return Err(parse_err("duplicate gens: line".into()));
                }
                seen_gens = true;
                for name in rest.split_whitespace() {
                    if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                        return Err(parse_err(format!("bad generator name '{name}'")));
                    }
                    if generators.iter().any(|g| g == name) {
                        return Err(parse_err(format!("duplicate generator '{name}'")));
                    }
                    generators.push(name.to_string());
                }
            } else if let Some(rest) = line.strip_prefix("h1basis:") {
                class_basis = Some(rest.split_whitespace().map(|s| s.to_string()).collect());
            } else if let Some(rest) = line.strip_prefix("rel:") {
                if !seen_gens {
                    return Err(parse_err("rel: before gens:".into()));
                }
                let sides: Vec<&str> = rest.split('=').collect();
                let relator = match sides.as_slice() {
                    [w] => parse_word(w, &generators).map_err(&parse_err)?,
                    [u, v] => {
                        let u = parse_word(u, &generators).map_err(&parse_err)?;
                        let v = parse_word(v, &generators).map_err(&parse_err)?;
                        u.concat(&v.inverse())
                    }
                    _ => return Err(parse_err("a relation has at most one '='".into())),
                };
                relators.push(relator.free_reduce());
            } else {
                return Err(parse_err(format!("unknown construct: {line}")));
            }
        }
        if !seen_gens {
            return Err(GroupError::Parse {
                line: 0,
                msg: "missing gens: line".into(),
            });
        }
        let g = GroupPresentation {
            generators,
            relators,
            class_basis,
        };
        if let Some(basis) = &g.class_basis {
            for name in basis {
                g.generator_index(name)?;
            }
        }
        Ok(g)
    }

    /// Parse a word against this presentation's generators.
    pub fn word(&self, text: &str) -> Result<Word, GroupError> {
        parse_word(text, &self.generators).map_err(|msg| GroupError::Parse { line: 0, msg })
    }

    /// The exponent-sum matrix, one row per relator.
    pub fn exponent_matrix(&self) -> Mat<BigInt> {
        let n = self.num_generators();
        let rows: Vec<Vec<BigInt>> = self
            .relators
            .iter()
            .map(|r| r.exponent_sums(n).into_iter().map(BigInt::from).collect())
            .collect();
        if rows.is_empty() {
            Mat::from_fn(0, n, |_, _| BigInt::zero())
        } else {
            Mat::from_rows(rows)
        }
    }

    /// Abelianization: free rank, torsion invariants, and the image of
    /// each generator in the free part.
    pub fn abelianize(&self) -> Result<AbelianizationMap, GroupError> {
        let n = self.num_generators();
        let m = self.exponent_matrix();
        let (rank, torsion, mut images) = if self.relators.is_empty() {
            let images: Vec<Vec<BigInt>> = (0..n)
                .map(|j| {
                    (0..n)
                        .map(|c| {
                            if c == j {
                                BigInt::one()
                            } else {
                                BigInt::zero()
                            }
                        })
                        .collect()
                })
                .collect();
            (n, Vec::new(), images)
        } else {
            let snf = smith_normal_form_with_transforms(&m);
            let right = snf.right.expect("transforms requested");
            let r = snf.rank;
            let torsion: Vec<BigInt> = snf
                .diagonal
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect();
            let images: Vec<Vec<BigInt>> = (0..n)
                .map(|j| (r..n).map(|c| right[(j, c)].clone()).collect())
                .collect();
            (n - r, torsion, images)
        };
        column_normal_form(&mut images, rank);
        let images: Vec<Vec<i64>> = images
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|c| i64::try_from(&c).expect("abelianization image fits i64"))
                    .collect()
            })
            .collect();

        let basis = match &self.class_basis {
            None => None,
            Some(names) => {
                let rows: Vec<Vec<i64>> = names
                    .iter()
                    .map(|name| self.generator_index(name).map(|i| images[i].clone()))
                    .collect::<Result<_, _>>()?;
                if names.len() != rank {
                    return Err(GroupError::BadBasis);
                }
                let inverse = invert_unimodular(&rows).ok_or(GroupError::BadBasis)?;
                Some(DeclaredBasis {
                    names: names.clone(),
                    inverse,
                })
            }
        };

        Ok(AbelianizationMap {
            rank,
            torsion,
            images,
            basis,
        })
    }
}

/// Basis of the free abelianization declared by a fixture, stored as the
/// inverse of the basis matrix so classes can be pulled back.
#[derive(Clone, Debug)]
struct DeclaredBasis {
    names: Vec<String>,
    inverse: Vec<Vec<i64>>,
}

/// The abelianization of a presented group.
#[derive(Clone, Debug)]
pub struct AbelianizationMap {
    /// Free rank of `H_1`.
    pub rank: usize,
    /// Nontrivial torsion invariants, each dividing the next.
    pub torsion: Vec<BigInt>,
    /// Image of each generator in the free part `Z^rank`.
    pub images: Vec<Vec<i64>>,
    basis: Option<DeclaredBasis>,
}

impl AbelianizationMap {
    /// Names of the declared class basis, if any.
    pub fn basis_names(&self) -> Option<&[String]> {
        self.basis.as_ref().map(|b| b.names.as_slice())
    }

    /// Compose the abelianization with a class given on the `H_1` basis,
    /// producing an integer character on the generators.
    ///
    /// With a declared basis `g_1..g_b`, the class `(p_1..p_b)` is the
    /// character sending `g_k` to `p_k`; otherwise the coordinates refer
    /// to the computed canonical basis.
    pub fn class_as_char(&self, phi: &[i64]) -> Result<Vec<i64>, GroupError> {
        if phi.len() != self.rank {
            return Err(GroupError::RankMismatch {
                got: phi.len(),
                want: self.rank,
            });
        }
        let coeffs: Vec<i64> = match &self.basis {
            None => phi.to_vec(),
            Some(b) => (0..self.rank)
                .map(|i| (0..self.rank).map(|j| b.inverse[i][j] * phi[j]).sum())
                .collect(),
        };
        Ok(self
            .images
            .iter()
            .map(|img| img.iter().zip(&coeffs).map(|(a, c)| a * c).sum())
            .collect())
    }
}

/// Deterministic column normal form of the image matrix: scan generators
/// top to bottom, Euclid-reduce across unused columns, make pivots
/// positive, and reduce earlier columns at each pivot row.
fn column_normal_form(m: &mut [Vec<BigInt>], cols: usize) {
    let rows = m.len();
    let mut next = 0usize;
    for i in 0..rows {
        if next == cols {
            break;
        }
        loop {
            let nz: Vec<usize> = (next..cols).filter(|&j| !m[i][j].is_zero()).collect();
            match nz.len() {
                0 => break,
                1 => {
                    let j = nz[0];
                    swap_cols(m, j, next);
                    break;
                }
                _ => {
                    let &jmin = nz.iter().min_by_key(|&&j| m[i][j].abs()).unwrap();
                    for &j in &nz {
                        if j == jmin {
                            continue;
                        }
                        let q = num_integer::Integer::div_floor(&m[i][j], &m[i][jmin]);
                        if q.is_zero() {
                            continue;
                        }
                        for row in m.iter_mut() {
                            let t = &row[jmin] * &q;
                            row[j] -= t;
                        }
                    }
                }
            }
        }
        if m[i][next].is_zero() {
            continue;
        }
        if m[i][next].is_negative() {
            for row in m.iter_mut() {
                row[next] = -row[next].clone();
            }
        }
        for j in 0..next {
            let q = num_integer::Integer::div_floor(&m[i][j], &m[i][next]);
            if q.is_zero() {
                continue;
            }
            for row in m.iter_mut() {
                let t = &row[next] * &q;
                row[j] -= t;
            }
        }
        next += 1;
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Exact inverse of a square integer matrix with determinant ±1.
fn invert_unimodular(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let det = det_i64(m);
    if det != 1 && det != -1 {
        return None;
    }
    // adjugate entries; matrices here are tiny and 1/det = det for det = ±1
    let inv = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = (0..n)
                        .filter(|&r| r != j)
                        .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                        .collect();
                    let cof = if minor.is_empty() { 1 } else { det_i64(&minor) };
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    sign * cof * det
                })
                .collect()
        })
        .collect();
    Some(inv)
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut acc = 0i64;
    for j in 0..n {
        let minor: Vec<Vec<i64>> = (1..n)
            .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c]).collect())
            .collect();
        let term = m[0][j] * det_i64(&minor);
        acc += if j % 2 == 0 { term } else { -term };
    }
    acc
}

/// Parse a word: whitespace-separated `name` or `name^exp` tokens, or a
/// run of single-letter generators with uppercase meaning inverse.
pub fn parse_word(text: &str, generators: &[String]) -> Result<Word, String> {
    let find = |name: &str| generators.iter().position(|g| g == name);
    let mut word = Word::empty();
    for token in text.split_whitespace() {
        let (base, exp) = match token.split_once('^') {
            None => (token, 1i64),
            Some((b, e)) => {
                let e: i64 = e
                    .parse()
                    .map_err(|_| format!("bad exponent in '{token}'"))?;
                (b, e)
            }
        };
        let letters: Vec<Letter> = if let Some(idx) = find(base) {
            vec![Letter::new(idx)]
        } else if base.chars().all(|c| c.is_ascii_alphabetic()) {
            // single-letter run; uppercase is the inverse
            base.chars()
                .map(|c| {
                    if c.is_ascii_uppercase() && find(&c.to_string()).is_some() {
                        return Err(format!("ambiguous letter '{c}'"));
                    }
                    let lower = c.to_ascii_lowercase().to_string();
                    let idx = find(&lower).ok_or_else(|| format!("unknown generator '{c}'"))?;
                    Ok(Letter {
                        gen: idx,
                        inverse: c.is_ascii_uppercase(),
                    })
                })
                .collect::<Result<_, _>>()?
        } else {
            return Err(format!("unknown generator '{base}'"));
        };
        let (letters, exp) = if exp < 0 {
            (
                letters.iter().rev().map(|l| l.inv()).collect::<Vec<_>>(),
                -exp,
            )
        } else {
            (letters, exp)
        };
        for _ in 0..exp {
            for &l in &letters {
                word.push(l);
            }
        }
    }
    Ok(word)
}

/// One crossing of a diagram: the over-arc, the incoming and outgoing
/// under-arcs, and the crossing sign.
#[derive(Clone, Debug)]
pub struct Crossing {
    pub over: String,
    pub incoming: String,
    pub outgoing: String,
    pub sign: i8,
}

impl Crossing {
    pub fn new(over: &str, incoming: &str, outgoing: &str, sign: i8) -> Self {
        Crossing {
            over: over.into(),
            incoming: incoming.into(),
            outgoing: outgoing.into(),
            sign,
        }
    }
}

/// Wirtinger presentation: one generator per arc, one relator per
/// crossing, `outgoing = over^s incoming over^-s`. Arcs that meet no
/// crossing (closed unknotted components) are listed in `extra_arcs`.
pub fn wirtinger(
    crossings: &[Crossing],
    extra_arcs: &[&str],
) -> Result<GroupPresentation, GroupError> {
    let mut generators: Vec<String> = Vec::new();
    {
        let mut add = |name: &str| {
            if !generators.iter().any(|g| g == name) {
                generators.push(name.to_string());
            }
        };
        for c in crossings {
            add(&c.over);
            add(&c.incoming);
            add(&c.outgoing);
        }
        for arc in extra_arcs {
            add(arc);
        }
    }
    let mut seen_out: Vec<&str> = Vec::new();
    for c in crossings {
        if c.sign != 1 && c.sign != -1 {
            return Err(GroupError::BadCrossing(format!(
                "sign must be +1 or -1, got {}",
                c.sign
            )));
        }
        if seen_out.contains(&c.outgoing.as_str()) {
            return Err(GroupError::BadCrossing(format!(
                "arc '{}' leaves two crossings",
                c.outgoing
            )));
        }
        seen_out.push(&c.outgoing);
    }
    let g_index = |name: &str, gens: &[String]| gens.iter().position(|g| g == name).unwrap();
    let relators: Vec<Word> = crossings
        .iter()
        .map(|c| {
            let over = Letter::new(g_index(&c.over, &generators));
            let over = if c.sign < 0 { over.inv() } else { over };
            let incoming = Letter::new(g_index(&c.incoming, &generators));
            let outgoing = Letter::new(g_index(&c.outgoing, &generators));
            // over^s incoming over^-s outgoing^-1
            Word(vec![over, incoming, over.inv(), outgoing.inv()]).free_reduce()
        })
        .collect();
    Ok(GroupPresentation::new(generators, relators))
}
