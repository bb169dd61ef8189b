//! The fixture manifest: a declarative list of expected invariants bound
//! to fixture files, and the engine that checks them.
//!
//! Each entry names the fixture files it reads, the expected value, and a
//! provenance tag (`literature` for published values, `derived` for
//! values fixed by an independent oracle, `elementary` for arithmetic).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::laurent::{CoeffRing, LaurentPoly};
use crate::presentation::GroupPresentation;
use crate::search::{verify_certificate, Certificate};
use crate::splice::{CohomologyClass, SpliceDiagram};
use crate::twisted::{tilde_norm_bound, twisted_alexander, PermRep};

/// One `c * |a.phi|` term of a closed-form norm expression.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct NormTerm {
    pub coefficient: i64,
    pub linear: Vec<i64>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    /// The vertex-product Alexander polynomial equals `expect` up to unit.
    SpliceAlexander {
        name: String,
        file: PathBuf,
        expect: String,
        provenance: String,
    },
    /// A single linking number.
    Linking {
        name: String,
        file: PathBuf,
        arrow: String,
        vertex: String,
        expect: i64,
        provenance: String,
    },
    /// Thurston norm of one class.
    ThurstonNorm {
        name: String,
        file: PathBuf,
        phi: Vec<i64>,
        expect: i64,
        provenance: String,
    },
    /// Thurston norm matches `sum_i c_i |l_i . phi|` on the whole
    /// `[-range, range]^n` grid.
    NormGrid {
        name: String,
        file: PathBuf,
        terms: Vec<NormTerm>,
        range: i64,
        provenance: String,
    },
    Genus {
        name: String,
        file: PathBuf,
        expect: i64,
        provenance: String,
    },
    Fibered {
        name: String,
        file: PathBuf,
        phi: Vec<i64>,
        expect: bool,
        provenance: String,
    },
    /// No primitive class in the grid fibers.
    FiberedGridNone {
        name: String,
        file: PathBuf,
        range: i64,
        provenance: String,
    },
    /// Single-variable class polynomial, with optional degree and
    /// monicness expectations.
    Specialize {
        name: String,
        file: PathBuf,
        phi: Vec<i64>,
        expect: String,
        #[serde(default)]
        degree: Option<i64>,
        #[serde(default)]
        monic: Option<bool>,
        provenance: String,
    },
    /// Degree of every nonzero class polynomial on the primitive grid is
    /// at most norm + 1.
    McmullenGrid {
        name: String,
        file: PathBuf,
        range: i64,
        provenance: String,
    },
    /// Abelianization rank and (a subset of) generator images.
    Abelianize {
        name: String,
        group: PathBuf,
        rank: usize,
        #[serde(default)]
        images: BTreeMap<String, Vec<i64>>,
        provenance: String,
    },
    /// The representation respects every relator.
    Homomorphism {
        name: String,
        group: PathBuf,
        rep: PathBuf,
        provenance: String,
    },
    /// A stored image equals the image of a word (derived-image
    /// consistency, e.g. `a = s t`).
    RepWordIdentity {
        name: String,
        rep: PathBuf,
        generator: String,
        word: String,
        provenance: String,
    },
    /// Twisted polynomial at each prime equals `expect` up to unit
    /// (`"0"` for vanishing); `tilde` checks the secondary polynomial.
    TwistedDelta {
        name: String,
        group: PathBuf,
        #[serde(default)]
        rep: Option<PathBuf>,
        phi: Vec<i64>,
        primes: Vec<u64>,
        expect: String,
        #[serde(default)]
        tilde: bool,
        provenance: String,
        #[serde(default)]
        slow: bool,
    },
    /// The secondary-polynomial norm bound at one prime.
    TildeBound {
        name: String,
        group: PathBuf,
        phi: Vec<i64>,
        prime: u64,
        expect: i64,
        provenance: String,
    },
    /// A stored certificate re-verifies against its group and class.
    StoredCertificate {
        name: String,
        group: PathBuf,
        file: PathBuf,
        phi: Vec<i64>,
        provenance: String,
    },
}

impl Check {
    pub fn name(&self) -> &str {
        match self {
            Check::SpliceAlexander { name, .. }
            | Check::Linking { name, .. }
            | Check::ThurstonNorm { name, .. }
            | Check::NormGrid { name, .. }
            | Check::Genus { name, .. }
            | Check::Fibered { name, .. }
            | Check::FiberedGridNone { name, .. }
            | Check::Specialize { name, .. }
            | Check::McmullenGrid { name, .. }
            | Check::Abelianize { name, .. }
            | Check::Homomorphism { name, .. }
            | Check::RepWordIdentity { name, .. }
            | Check::TwistedDelta { name, .. }
            | Check::TildeBound { name, .. }
            | Check::StoredCertificate { name, .. } => name,
        }
    }

    pub fn is_slow(&self) -> bool {
        matches!(self, Check::TwistedDelta { slow: true, .. })
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct Manifest {
    pub checks: Vec<Check>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn load_diagram(base: &Path, file: &Path) -> Result<SpliceDiagram, String> {
    let text =
        std::fs::read_to_string(base.join(file)).map_err(|e| format!("{}: {e}", file.display()))?;
    SpliceDiagram::parse(&text).map_err(|e| format!("{}: {e}", file.display()))
}

fn load_group(base: &Path, file: &Path) -> Result<GroupPresentation, String> {
    let text =
        std::fs::read_to_string(base.join(file)).map_err(|e| format!("{}: {e}", file.display()))?;
    GroupPresentation::parse(&text).map_err(|e| format!("{}: {e}", file.display()))
}

fn load_rep(base: &Path, file: &Path) -> Result<PermRep, String> {
    let text =
        std::fs::read_to_string(base.join(file)).map_err(|e| format!("{}: {e}", file.display()))?;
    PermRep::parse(&text).map_err(|e| format!("{}: {e}", file.display()))
}

fn primitive_grid(range: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for p in -range..=range {
        for q in -range..=range {
            if (p, q) != (0, 0) && num_integer::gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// Run one check against the fixture tree rooted at `base`.
pub fn run_check(check: &Check, base: &Path) -> CheckOutcome {
    let name = check.name().to_string();
    let result = run_check_inner(check, base);
    match result {
        Ok(detail) => CheckOutcome {
            name,
            passed: true,
            detail,
        },
        Err(detail) => CheckOutcome {
            name,
            passed: false,
            detail,
        },
    }
}

fn run_check_inner(check: &Check, base: &Path) -> Result<String, String> {
    match check {
        Check::SpliceAlexander { file, expect, .. } => {
            let d = load_diagram(base, file)?;
            let delta = d.alexander_polynomial().map_err(|e| e.to_string())?;
            let vars_owned = d.variables();
            let vars: Vec<&str> = vars_owned.iter().map(|s| s.as_str()).collect();
            let expected =
                LaurentPoly::parse_in(expect, CoeffRing::Int, &vars).map_err(|e| e.to_string())?;
            if delta.eq_up_to_unit(&expected) {
                Ok(format!("alexander = {delta}"))
            } else {
                Err(format!("alexander = {delta}, expected {expect}"))
            }
        }
        Check::Linking {
            file,
            arrow,
            vertex,
            expect,
            ..
        } => {
            let d = load_diagram(base, file)?;
            let l = d
                .linking_number_by_id(arrow, vertex)
                .map_err(|e| e.to_string())?;
            if l == *expect {
                Ok(format!("l({arrow},{vertex}) = {l}"))
            } else {
                Err(format!("l({arrow},{vertex}) = {l}, expected {expect}"))
            }
        }
        Check::ThurstonNorm {
            file, phi, expect, ..
        } => {
            let d = load_diagram(base, file)?;
            let n = d
                .thurston_norm(&CohomologyClass(phi.clone()))
                .map_err(|e| e.to_string())?;
            if n == *expect {
                Ok(format!("norm{phi:?} = {n}"))
            } else {
                Err(format!("norm{phi:?} = {n}, expected {expect}"))
            }
        }
        Check::NormGrid {
            file, terms, range, ..
        } => {
            let d = load_diagram(base, file)?;
            for p in -range..=*range {
                for q in -range..=*range {
                    let got = d
                        .thurston_norm(&CohomologyClass(vec![p, q]))
                        .map_err(|e| e.to_string())?;
                    let want: i64 = terms
                        .iter()
                        .map(|t| t.coefficient * (t.linear[0] * p + t.linear[1] * q).abs())
                        .sum();
                    if got != want {
                        return Err(format!("norm({p},{q}) = {got}, expected {want}"));
                    }
                }
            }
            Ok(format!(
                "norm formula holds on [-{range},{range}]^2 ({} classes)",
                (2 * range + 1) * (2 * range + 1)
            ))
        }
        Check::Genus { file, expect, .. } => {
            let d = load_diagram(base, file)?;
            let g = d.genus().map_err(|e| e.to_string())?;
            if g == *expect {
                Ok(format!("genus = {g}"))
            } else {
                Err(format!("genus = {g}, expected {expect}"))
            }
        }
        Check::Fibered {
            file, phi, expect, ..
        } => {
            let d = load_diagram(base, file)?;
            let f = d
                .is_fibered(&CohomologyClass(phi.clone()))
                .map_err(|e| e.to_string())?;
            if f == *expect {
                Ok(format!("fibered{phi:?} = {f}"))
            } else {
                Err(format!("fibered{phi:?} = {f}, expected {expect}"))
            }
        }
        Check::FiberedGridNone { file, range, .. } => {
            let d = load_diagram(base, file)?;
            for (p, q) in primitive_grid(*range) {
                if d.is_fibered(&CohomologyClass(vec![p, q]))
                    .map_err(|e| e.to_string())?
                {
                    return Err(format!("class ({p},{q}) fibers"));
                }
            }
            Ok(format!("no primitive class in [-{range},{range}]^2 fibers"))
        }
        Check::Specialize {
            file,
            phi,
            expect,
            degree,
            monic,
            ..
        } => {
            let d = load_diagram(base, file)?;
            let delta = d.alexander_polynomial().map_err(|e| e.to_string())?;
            let s = d
                .specialize(&delta, &CohomologyClass(phi.clone()))
                .map_err(|e| e.to_string())?;
            let expected =
                LaurentPoly::parse_in(expect, CoeffRing::Int, &["t"]).map_err(|e| e.to_string())?;
            if !s.eq_up_to_unit(&expected) {
                return Err(format!("class polynomial = {s}, expected {expect}"));
            }
            if let Some(want) = degree {
                let got = s.degree_span(0).map_err(|e| e.to_string())?;
                if got != *want {
                    return Err(format!("degree = {got}, expected {want}"));
                }
            }
            if let Some(want) = monic {
                if s.is_monic() != *want {
                    return Err(format!("monic = {}, expected {want}", s.is_monic()));
                }
            }
            Ok(format!("class polynomial{phi:?} = {s}"))
        }
        Check::McmullenGrid { file, range, .. } => {
            let d = load_diagram(base, file)?;
            let delta = d.alexander_polynomial().map_err(|e| e.to_string())?;
            if delta.is_zero() {
                return Ok("polynomial vanishes; bound vacuous".into());
            }
            let mut checked = 0;
            for (p, q) in primitive_grid(*range) {
                let phi = CohomologyClass(vec![p, q]);
                let s = d.specialize(&delta, &phi).map_err(|e| e.to_string())?;
                if s.is_zero() {
                    continue;
                }
                let deg = s.degree_span(0).map_err(|e| e.to_string())?;
                let norm = d.thurston_norm(&phi).map_err(|e| e.to_string())?;
                if deg > norm + 1 {
                    return Err(format!("degree {deg} > norm {norm} + 1 at ({p},{q})"));
                }
                checked += 1;
            }
            Ok(format!("degree bound holds at {checked} primitive classes"))
        }
        Check::Abelianize {
            group,
            rank,
            images,
            ..
        } => {
            let g = load_group(base, group)?;
            let ab = g.abelianize().map_err(|e| e.to_string())?;
            if ab.rank != *rank {
                return Err(format!("rank = {}, expected {rank}", ab.rank));
            }
            for (gen, want) in images {
                let idx = g.generator_index(gen).map_err(|e| e.to_string())?;
                let got = &ab.images[idx];
                if got != want {
                    return Err(format!("image({gen}) = {got:?}, expected {want:?}"));
                }
            }
            Ok(format!(
                "rank {} with {} pinned images",
                ab.rank,
                images.len()
            ))
        }
        Check::Homomorphism { group, rep, .. } => {
            let g = load_group(base, group)?;
            let r = load_rep(base, rep)?;
            if r.respects(&g).map_err(|e| e.to_string())? {
                Ok("representation respects all relators".into())
            } else {
                Err("some relator does not map to the identity".into())
            }
        }
        Check::RepWordIdentity {
            rep,
            generator,
            word,
            ..
        } => {
            let r = load_rep(base, rep)?;
            // evaluate the word against the stored images by name
            let names: Vec<String> = r.named_images().map(|(n, _)| n.to_string()).collect();
            let w = crate::presentation::parse_word(word, &names).map_err(|e| e.to_string())?;
            let mut acc = crate::twisted::Perm::identity(r.degree());
            for l in &w.0 {
                let img = r.image(&names[l.gen]).map_err(|e| e.to_string())?;
                let img = if l.inverse {
                    img.inverse()
                } else {
                    img.clone()
                };
                acc = acc.compose(&img);
            }
            let stored = r.image(generator).map_err(|e| e.to_string())?;
            if *stored == acc {
                Ok(format!("image({generator}) = image({word})"))
            } else {
                Err(format!("image({generator}) differs from image({word})"))
            }
        }
        Check::TwistedDelta {
            group,
            rep,
            phi,
            primes,
            expect,
            tilde,
            ..
        } => {
            let g = load_group(base, group)?;
            let r = match rep {
                Some(path) => load_rep(base, path)?,
                None => PermRep::trivial(1),
            };
            let ab = g.abelianize().map_err(|e| e.to_string())?;
            let chi = ab.class_as_char(phi).map_err(|e| e.to_string())?;
            for &p in primes {
                let res = twisted_alexander(&g, &r, &chi, p, None).map_err(|e| e.to_string())?;
                let poly = if *tilde { &res.delta_tilde } else { &res.delta };
                let passed = if expect == "0" {
                    poly.is_zero()
                } else {
                    let expected = LaurentPoly::parse_in(expect, CoeffRing::Fp(p), &["t"])
                        .map_err(|e| e.to_string())?;
                    poly.eq_up_to_unit(&expected)
                };
                if !passed {
                    return Err(format!("mod {p}: got {poly}, expected {expect}"));
                }
            }
            Ok(format!("matches {expect} at primes {primes:?}"))
        }
        Check::TildeBound {
            group,
            phi,
            prime,
            expect,
            ..
        } => {
            let g = load_group(base, group)?;
            let ab = g.abelianize().map_err(|e| e.to_string())?;
            let chi = ab.class_as_char(phi).map_err(|e| e.to_string())?;
            let res = twisted_alexander(&g, &PermRep::trivial(1), &chi, *prime, None)
                .map_err(|e| e.to_string())?;
            let bound = tilde_norm_bound(&res.delta_tilde, 1).map_err(|e| e.to_string())?;
            if bound == *expect {
                Ok(format!("norm bound {bound}"))
            } else {
                Err(format!("norm bound {bound}, expected {expect}"))
            }
        }
        Check::StoredCertificate {
            group, file, phi, ..
        } => {
            let g = load_group(base, group)?;
            let text = std::fs::read_to_string(base.join(file))
                .map_err(|e| format!("{}: {e}", file.display()))?;
            let cert = Certificate::parse(&text)?;
            let ab = g.abelianize().map_err(|e| e.to_string())?;
            let chi = ab.class_as_char(phi).map_err(|e| e.to_string())?;
            if verify_certificate(&g, &chi, &cert) {
                Ok(format!("certificate reproduces at prime {}", cert.prime))
            } else {
                Err("certificate does not reproduce".into())
            }
        }
    }
}

/// Run every check (optionally skipping slow ones). The outcome list is
/// in manifest order.
pub fn run_manifest(manifest: &Manifest, base: &Path, include_slow: bool) -> Vec<CheckOutcome> {
    manifest
        .checks
        .iter()
        .filter(|c| include_slow || !c.is_slow())
        .map(|c| run_check(c, base))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_base() -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
    }

    #[test]
    fn single_check_runs() {
        let check = Check::SpliceAlexander {
            name: "k-alexander".into(),
            file: "splice/k.splice".into(),
            expect: "1 - t + t^2".into(),
            provenance: "literature".into(),
        };
        let outcome = run_check(&check, &fixture_base());
        assert!(outcome.passed, "{}", outcome.detail);
    }

    #[test]
    fn corrupted_expectation_fails_by_name() {
        let manifest = Manifest {
            checks: vec![
                Check::SpliceAlexander {
                    name: "good".into(),
                    file: "splice/k.splice".into(),
                    expect: "1 - t + t^2".into(),
                    provenance: "literature".into(),
                },
                Check::SpliceAlexander {
                    name: "corrupted".into(),
                    file: "splice/k.splice".into(),
                    expect: "1 + t + t^2".into(),
                    provenance: "literature".into(),
                },
            ],
        };
        let outcomes = run_manifest(&manifest, &fixture_base(), true);
        assert_eq!(outcomes.len(), 2);
        assert!(outcomes[0].passed);
        assert!(!outcomes[1].passed);
        assert_eq!(outcomes[1].name, "corrupted");
    }

    #[test]
    fn empty_manifest_is_vacuous() {
        let manifest = Manifest { checks: vec![] };
        let outcomes = run_manifest(&manifest, &fixture_base(), true);
        assert!(outcomes.is_empty());
    }

    #[test]
    fn manifest_json_roundtrip() {
        let manifest = Manifest {
            checks: vec![Check::Genus {
                name: "k-genus".into(),
                file: "splice/k.splice".into(),
                expect: 1,
                provenance: "literature".into(),
            }],
        };
        let text = serde_json::to_string_pretty(&manifest).unwrap();
        let back = Manifest::parse(&text).unwrap();
        assert_eq!(back.checks.len(), 1);
        assert_eq!(back.checks[0].name(), "k-genus");
    }
}
