//! Acceptance suite: every criterion the artifact must meet, one test per
//! criterion, each printing a pass/fail line. Expected values pinned here
//! are either published invariants of the fixture links, values computed
//! by the independent oracles in this file, or elementary arithmetic.

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use graphlink::laurent::{
    laurent_smith_normal_form, smith_normal_form, CoeffRing, FpPoly, LaurentPoly, Mat, SnfEntry,
};
use graphlink::presentation::{fox_derivative, GroupPresentation, GroupRingElement, Letter, Word};
use graphlink::search::{obstruction_sweep, verify_certificate, CertReason, SearchConfig};
use graphlink::splice::{CohomologyClass, SpliceDiagram};
use graphlink::twisted::{fk_degree_test, tilde_norm_bound, twisted_alexander, PermRep};

const K_SPLICE: &str = include_str!("../fixtures/splice/k.splice");
const L_ALPHA_SPLICE: &str = include_str!("../fixtures/splice/l_alpha.splice");
const L_BETA_SPLICE: &str = include_str!("../fixtures/splice/l_beta.splice");
const L_GAMMA_SPLICE: &str = include_str!("../fixtures/splice/l_gamma.splice");
const TREFOIL_SPLICE: &str = include_str!("../fixtures/splice/trefoil.splice");
const PI1_K: &str = include_str!("../fixtures/groups/pi1_k.grp");
const PI1_L_ALPHA: &str = include_str!("../fixtures/groups/pi1_l_alpha.grp");
const PI1_L_BETA: &str = include_str!("../fixtures/groups/pi1_l_beta.grp");
const PI1_L_GAMMA: &str = include_str!("../fixtures/groups/pi1_l_gamma.grp");
const TREFOIL_GRP: &str = include_str!("../fixtures/groups/trefoil.grp");
const ALPHA_K: &str = include_str!("../fixtures/reps/alpha_k.rep");
const ALPHA1: &str = include_str!("../fixtures/reps/alpha1_l_alpha.rep");
const ALPHA2: &str = include_str!("../fixtures/reps/alpha2_l_alpha.rep");

fn diagram(text: &str) -> SpliceDiagram {
    SpliceDiagram::parse(text).unwrap()
}

fn group(text: &str) -> GroupPresentation {
    GroupPresentation::parse(text).unwrap()
}

fn char_for(g: &GroupPresentation, phi: &[i64]) -> Vec<i64> {
    g.abelianize().unwrap().class_as_char(phi).unwrap()
}

fn poly(text: &str, vars: &[&str]) -> LaurentPoly {
    LaurentPoly::parse_in(text, CoeffRing::Int, vars).unwrap()
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

fn report(criterion: &str, detail: &str) {
    println!("PASS {criterion}: {detail}");
}

#[test]
fn criterion_01_knot_k_invariants() {
    let d = diagram(K_SPLICE);
    let delta = d.alexander_polynomial().unwrap();
    assert!(
        delta.eq_up_to_unit(&poly("1 - t + t^2", &["t"])),
        "alexander = {delta}"
    );
    assert_eq!(d.thurston_norm(&CohomologyClass(vec![1])).unwrap(), 1);
    assert_eq!(d.genus().unwrap(), 1);
    assert!(!d.is_fibered(&CohomologyClass(vec![1])).unwrap());
    for (v, l) in [
        ("v2", 0),
        ("v3", 0),
        ("v4", 0),
        ("v5", 0),
        ("v6", 6),
        ("v7", 3),
        ("v8", 2),
    ] {
        assert_eq!(d.linking_number_by_id("v1", v).unwrap(), l, "l(v1,{v})");
    }
    report(
        "criterion 1",
        "knot k: alexander 1 - t + t^2, norm 1, genus 1, not fibered, linkings 6/3/2",
    );
}

#[test]
fn criterion_02_l_alpha_invariants() {
    let d = diagram(L_ALPHA_SPLICE);
    let delta = d.alexander_polynomial().unwrap();
    let expected = poly(
        "(t1^12 - t1^6 + 1)(t1^4 t2^4 + t1^2 t2^2 + 1)(t1^3 t2^3 + 1)",
        &["t1", "t2"],
    );
    assert!(delta.eq_up_to_unit(&expected));
    for p in -5i64..=5 {
        for q in -5i64..=5 {
            assert_eq!(
                d.thurston_norm(&CohomologyClass(vec![p, q])).unwrap(),
                7 * (p + q).abs() + 12 * p.abs(),
                "norm({p},{q})"
            );
        }
    }
    assert!(!d.is_fibered(&CohomologyClass(vec![0, 1])).unwrap());
    assert!(!d.is_fibered(&CohomologyClass(vec![1, -1])).unwrap());
    report(
        "criterion 2",
        "l_alpha: triple-product alexander, norm 7|p+q|+12|p| on the grid, (0,1) and (1,-1) not fibered",
    );
}

#[test]
fn criterion_03_l_alpha_specializations() {
    let d = diagram(L_ALPHA_SPLICE);
    let delta = d.alexander_polynomial().unwrap();

    let s1 = d.specialize(&delta, &CohomologyClass(vec![1, -1])).unwrap();
    assert!(s1.eq_up_to_unit(&poly("6(t - 1)(t^12 - t^6 + 1)", &["t"])));
    assert_eq!(s1.degree_span(0).unwrap(), 13);
    assert!(!s1.is_monic());

    let s2 = d.specialize(&delta, &CohomologyClass(vec![0, 1])).unwrap();
    assert!(s2.eq_up_to_unit(&poly("(t^6 - 1)(t^2 - t + 1)", &["t"])));
    assert_eq!(s2.degree_span(0).unwrap(), 8);
    assert!(s2.is_monic());
    report(
        "criterion 3",
        "specializations: 6(t-1)(t^12-t^6+1) non-monic deg 13; (t^6-1)(t^2-t+1) monic deg 8",
    );
}

#[test]
fn criterion_04_l_beta_and_l_gamma() {
    let beta = diagram(L_BETA_SPLICE);
    let gamma = diagram(L_GAMMA_SPLICE);
    assert!(beta.alexander_polynomial().unwrap().is_zero());
    assert!(gamma.alexander_polynomial().unwrap().is_zero());
    for p in -5i64..=5 {
        for q in -5i64..=5 {
            let phi = CohomologyClass(vec![p, q]);
            assert_eq!(beta.thurston_norm(&phi).unwrap(), (p + q).abs());
            assert_eq!(
                gamma.thurston_norm(&phi).unwrap(),
                7 * p.abs() + (6 * p + q).abs()
            );
        }
    }
    for (p, q) in primitive_grid(5) {
        assert!(!beta.is_fibered(&CohomologyClass(vec![p, q])).unwrap());
        assert!(!gamma.is_fibered(&CohomologyClass(vec![p, q])).unwrap());
    }
    report(
        "criterion 4",
        "l_beta and l_gamma: vanishing alexander, norms |p+q| and 7|p|+|6p+q|, no fibered class",
    );
}

#[test]
fn criterion_05_homomorphism_fixtures() {
    let k = group(PI1_K);
    let alpha_k = PermRep::parse(ALPHA_K).unwrap();
    assert!(alpha_k.respects(&k).unwrap());

    let l_alpha = group(PI1_L_ALPHA);
    for text in [ALPHA1, ALPHA2] {
        assert!(PermRep::parse(text).unwrap().respects(&l_alpha).unwrap());
    }

    // derived-image consistency: n = x and a = s t
    let n = alpha_k.image("n").unwrap();
    let x = alpha_k.image("x").unwrap();
    assert_eq!(n, x);
    let a = alpha_k.image("a").unwrap().clone();
    let st = alpha_k
        .image("s")
        .unwrap()
        .compose(alpha_k.image("t").unwrap());
    assert_eq!(a, st);
    report(
        "criterion 5",
        "representation fixtures respect their groups; derived images n = x and a = s t hold",
    );
}

#[test]
fn criterion_06_twisted_vanishing_for_k() {
    let g = group(PI1_K);
    let rep = PermRep::parse(ALPHA_K).unwrap();
    let chi = char_for(&g, &[1]);
    for p in [5u64, 7, 11, 13] {
        let res = twisted_alexander(&g, &rep, &chi, p, None).unwrap();
        assert!(res.delta.is_zero(), "delta mod {p} = {}", res.delta);
    }
    report(
        "criterion 6",
        "twisted polynomial of k vanishes mod 5, 7, 11, 13",
    );
}

#[test]
#[ignore = "slow-tagged: the remaining published primes"]
fn criterion_06_twisted_vanishing_for_k_high_primes() {
    let g = group(PI1_K);
    let rep = PermRep::parse(ALPHA_K).unwrap();
    let chi = char_for(&g, &[1]);
    for p in [17u64, 19, 23, 29] {
        let res = twisted_alexander(&g, &rep, &chi, p, None).unwrap();
        assert!(res.delta.is_zero(), "delta mod {p} = {}", res.delta);
    }
    report(
        "criterion 6 (slow)",
        "twisted polynomial of k vanishes mod 17, 19, 23, 29",
    );
}

#[test]
fn criterion_07_twisted_vanishing_for_l_alpha() {
    let g = group(PI1_L_ALPHA);
    let a1 = PermRep::parse(ALPHA1).unwrap();
    let a2 = PermRep::parse(ALPHA2).unwrap();
    let phi1 = char_for(&g, &[0, 1]);
    let phi2 = char_for(&g, &[1, -1]);
    let r1 = twisted_alexander(&g, &a1, &phi1, 7, None).unwrap();
    assert!(r1.delta.is_zero(), "phi1 mod 7: {}", r1.delta);
    let r2 = twisted_alexander(&g, &a2, &phi2, 5, None).unwrap();
    assert!(r2.delta.is_zero(), "phi2 mod 5: {}", r2.delta);
    report(
        "criterion 7",
        "twisted polynomials of l_alpha vanish: (alpha1, (0,1)) mod 7 and (alpha2, (1,-1)) mod 5",
    );
}

#[test]
#[ignore = "slow-tagged: the remaining published primes"]
fn criterion_07_twisted_vanishing_for_l_alpha_high_primes() {
    let g = group(PI1_L_ALPHA);
    let a1 = PermRep::parse(ALPHA1).unwrap();
    let a2 = PermRep::parse(ALPHA2).unwrap();
    let phi1 = char_for(&g, &[0, 1]);
    let phi2 = char_for(&g, &[1, -1]);
    for p in [11u64, 13, 17, 19, 23, 29] {
        let r = twisted_alexander(&g, &a1, &phi1, p, None).unwrap();
        assert!(r.delta.is_zero(), "phi1 mod {p}: {}", r.delta);
    }
    for p in [7u64, 11, 13, 17, 19, 23, 29] {
        let r = twisted_alexander(&g, &a2, &phi2, p, None).unwrap();
        assert!(r.delta.is_zero(), "phi2 mod {p}: {}", r.delta);
    }
    report(
        "criterion 7 (slow)",
        "twisted polynomials of l_alpha vanish at every remaining published prime",
    );
}

#[test]
fn criterion_08_secondary_polynomial() {
    let expected = |p: u64| LaurentPoly::parse_in("1 - t + t^2", CoeffRing::Fp(p), &["t"]).unwrap();
    for (grp_text, splice_text, name) in [
        (PI1_L_BETA, L_BETA_SPLICE, "l_beta"),
        (PI1_L_GAMMA, L_GAMMA_SPLICE, "l_gamma"),
    ] {
        let g = group(grp_text);
        let chi = char_for(&g, &[0, 1]);
        let res = twisted_alexander(&g, &PermRep::trivial(1), &chi, 13, None).unwrap();
        assert!(
            res.delta_tilde.eq_up_to_unit(&expected(13)),
            "{name}: {}",
            res.delta_tilde
        );
        let bound = tilde_norm_bound(&res.delta_tilde, 1).unwrap();
        assert_eq!(bound, 1, "{name} bound");
        let norm = diagram(splice_text)
            .thurston_norm(&CohomologyClass(vec![0, 1]))
            .unwrap();
        assert_eq!(bound, norm, "{name}: the bound is sharp");
    }
    report(
        "criterion 8",
        "secondary polynomial 1 - t + t^2 mod 13 for l_beta and l_gamma; norm bound 1 is sharp",
    );
}

#[test]
fn criterion_09_trefoil_sanity_chain() {
    let d = diagram(TREFOIL_SPLICE);
    assert!(d.is_fibered(&CohomologyClass(vec![1])).unwrap());

    let g = group(TREFOIL_GRP);
    let chi = char_for(&g, &[1]);
    for p in [5u64, 7, 13] {
        let res = twisted_alexander(&g, &PermRep::trivial(1), &chi, p, None).unwrap();
        let expected = LaurentPoly::parse_in("1 - t + t^2", CoeffRing::Fp(p), &["t"]).unwrap();
        assert!(res.delta.eq_up_to_unit(&expected), "mod {p}: {}", res.delta);
        assert_ne!(res.monic, graphlink::twisted::Monicity::No);
        let fk = fk_degree_test(&res, 1, 1);
        assert_eq!(fk.degree_delta, Some(2));
        assert_eq!(fk.degree_delta_zero, 1);
        assert_eq!(fk.rhs, 2); // 1 * 1 + 1 + 0
        assert!(!fk.obstructed);
    }
    report(
        "criterion 9",
        "trefoil: fibered, twisted polynomial 1 - t + t^2 mod 5/7/13, degree test 2 = 1 + 1 + 0",
    );
}

#[test]
fn criterion_10_search_produces_verifiable_certificate() {
    let g = group(PI1_K);
    let chi = char_for(&g, &[1]);
    let mut cfg = SearchConfig::new(5, vec![5]).unwrap();
    cfg.stop_at_first = true;
    cfg.conjugacy_reduction = true;
    cfg.time_budget = Some(std::time::Duration::from_secs(600));
    let started = std::time::Instant::now();
    let outcome = obstruction_sweep(&g, &chi, &cfg).unwrap();
    assert!(!outcome.exhausted, "budget exhausted: {}", outcome.stats);
    assert!(!outcome.certificates.is_empty(), "no certificate found");
    let cert = &outcome.certificates[0];
    assert_eq!(cert.reason, CertReason::Vanishes);
    assert_eq!(cert.prime, 5);
    assert!(verify_certificate(&g, &chi, cert));
    report(
        "criterion 10",
        &format!(
            "degree-5 search found a verifiable vanishing certificate in {:.1?} ({})",
            started.elapsed(),
            outcome.stats
        ),
    );
}

#[test]
fn criterion_11_property_suites() {
    // Fox fundamental identity on 200 random words of length <= 20
    let mut rng = StdRng::seed_from_u64(2026);
    let num_gens = 3;
    for _ in 0..200 {
        let w = Word(
            (0..rng.gen_range(0..=20))
                .map(|_| Letter {
                    gen: rng.gen_range(0..num_gens),
                    inverse: rng.gen_bool(0.5),
                })
                .collect(),
        )
        .free_reduce();
        let mut total = GroupRingElement::zero();
        for gen in 0..num_gens {
            let mut x_minus_1 = GroupRingElement::zero();
            x_minus_1.add_term(Word(vec![Letter::new(gen)]), 1);
            x_minus_1.add_term(Word::empty(), -1);
            total = total.add(&fox_derivative(&w, gen).mul(&x_minus_1));
        }
        let mut w_minus_1 = GroupRingElement::zero();
        w_minus_1.add_term(w.clone(), 1);
        w_minus_1.add_term(Word::empty(), -1);
        assert_eq!(total, w_minus_1, "fox identity fails for {w:?}");
    }

    // Smith normal form against the brute-force minor-gcd oracle:
    // 50 random matrices over F_5[t] and 50 over Z, each up to 5x5
    for round in 0..50 {
        let nr = rng.gen_range(1..=5);
        let nc = rng.gen_range(1..=5);
        let m = Mat::from_fn(nr, nc, |_, _| {
            let deg = rng.gen_range(0..=2);
            FpPoly::new(
                5,
                (0..=deg).map(|_| rng.gen_range(0..5)).collect::<Vec<_>>(),
            )
        });
        let snf = smith_normal_form(&m);
        let mut prod = FpPoly::one(5);
        for (r, d) in snf.diagonal.iter().enumerate() {
            prod = prod.mul(d);
            assert_eq!(
                prod.monic(),
                minor_gcd_fp(&m, r + 1),
                "round {round}: minor gcd mismatch at rank {}",
                r + 1
            );
        }
    }
    for round in 0..50 {
        let nr = rng.gen_range(1..=5);
        let nc = rng.gen_range(1..=5);
        let m = Mat::from_fn(nr, nc, |_, _| BigInt::from(rng.gen_range(-6i64..=6)));
        let snf = smith_normal_form(&m);
        let mut prod = BigInt::from(1);
        for (r, d) in snf.diagonal.iter().enumerate() {
            prod *= d;
            assert_eq!(
                prod,
                minor_gcd_int(&m, r + 1),
                "round {round}: minor gcd mismatch at rank {}",
                r + 1
            );
        }
    }

    // Laurent ring axioms on random samples
    for _ in 0..100 {
        let mut sample = |ring| random_laurent(&mut rng, ring);
        let (a, b, c) = (
            sample(CoeffRing::Int),
            sample(CoeffRing::Int),
            sample(CoeffRing::Int),
        );
        assert_eq!(&a * &b, &b * &a);
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        }
    }

    // column-deletion independence of the twisted polynomial
    for (grp_text, class) in [(TREFOIL_GRP, vec![1]), (PI1_L_BETA, vec![0, 1])] {
        let g = group(grp_text);
        let chi = char_for(&g, &class);
        let admissible: Vec<usize> = chi
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, _)| j)
            .collect();
        let reference =
            twisted_alexander(&g, &PermRep::trivial(1), &chi, 13, Some(admissible[0])).unwrap();
        for &j in &admissible[1..] {
            let res = twisted_alexander(&g, &PermRep::trivial(1), &chi, 13, Some(j)).unwrap();
            assert_eq!(res.delta.is_zero(), reference.delta.is_zero());
            assert!(res.delta.eq_up_to_unit(&reference.delta));
            assert!(res.delta_tilde.eq_up_to_unit(&reference.delta_tilde));
        }
    }
    report(
        "criterion 11",
        "fox identity (200 words), snf vs minor-gcd oracle (100 matrices), ring axioms, column-deletion independence",
    );
}

#[test]
fn criterion_12_mcmullen_audit() {
    // knots: degree <= norm + div (div = 1 on primitive classes)
    for text in [K_SPLICE, TREFOIL_SPLICE] {
        let d = diagram(text);
        let delta = d.alexander_polynomial().unwrap();
        let norm = d.thurston_norm(&CohomologyClass(vec![1])).unwrap();
        assert!(delta.degree_span(0).unwrap() <= norm + 1);
    }
    // links: degree of every nonzero class polynomial <= norm + 1
    let mut audited = 0;
    for text in [L_ALPHA_SPLICE, L_BETA_SPLICE, L_GAMMA_SPLICE] {
        let d = diagram(text);
        let delta = d.alexander_polynomial().unwrap();
        if delta.is_zero() {
            continue;
        }
        for (p, q) in primitive_grid(5) {
            let phi = CohomologyClass(vec![p, q]);
            let s = d.specialize(&delta, &phi).unwrap();
            if s.is_zero() {
                continue;
            }
            let norm = d.thurston_norm(&phi).unwrap();
            assert!(
                s.degree_span(0).unwrap() <= norm + 1,
                "bound fails at ({p},{q})"
            );
            audited += 1;
        }
    }
    report(
        "criterion 12",
        &format!("degree bound holds for every fixture ({audited} link classes audited)"),
    );
}

// --- independent oracles for criterion 11 ---------------------------------

/// Determinant by Laplace expansion over any entry ring.
fn det<T: SnfEntry>(m: &Mat<T>, rows: &[usize], cols: &[usize]) -> T {
    if rows.len() == 1 {
        return m[(rows[0], cols[0])].clone();
    }
    let mut acc = m[(rows[0], cols[0])].zero_like();
    for (idx, &c) in cols.iter().enumerate() {
        let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det(m, &rows[1..], &sub_cols);
        let term = m[(rows[0], c)].mul(&minor);
        acc = if idx % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn minor_gcd_fp(m: &Mat<FpPoly>, k: usize) -> FpPoly {
    let mut g = FpPoly::zero(5);
    for rows in combinations(m.nrows(), k) {
        for cols in combinations(m.ncols(), k) {
            g = g.gcd(&det(m, &rows, &cols));
        }
    }
    g
}

fn minor_gcd_int(m: &Mat<BigInt>, k: usize) -> BigInt {
    let mut g = BigInt::from(0);
    for rows in combinations(m.nrows(), k) {
        for cols in combinations(m.ncols(), k) {
            g = num_integer::Integer::gcd(&g, &det(m, &rows, &cols));
        }
    }
    g
}

fn random_laurent(rng: &mut StdRng, ring: CoeffRing) -> LaurentPoly {
    let terms: Vec<(Vec<i64>, BigInt)> = (0..rng.gen_range(0..5))
        .map(|_| {
            (
                vec![rng.gen_range(-8i64..=8)],
                BigInt::from(rng.gen_range(-5i64..=5)),
            )
        })
        .collect();
    LaurentPoly::from_terms(ring, &["t"], terms)
}

// The localized reduction must agree with the strict one on rank and on
// the invariant factors up to variable powers; cheap cross-check.
#[test]
fn localized_and_strict_reductions_agree() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..40 {
        let nr = rng.gen_range(1..=4);
        let nc = rng.gen_range(1..=4);
        let m = Mat::from_fn(nr, nc, |_, _| {
            let deg = rng.gen_range(0..=2);
            FpPoly::new(
                5,
                (0..=deg).map(|_| rng.gen_range(0..5)).collect::<Vec<_>>(),
            )
        });
        let strict = smith_normal_form(&m);
        let localized = laurent_smith_normal_form(&m);
        assert_eq!(strict.rank, localized.rank);
        for (s, l) in strict.diagonal.iter().zip(&localized.diagonal) {
            let stripped = if s.is_zero() {
                s.clone()
            } else {
                s.strip_valuation()
            };
            assert_eq!(stripped.monic(), l.monic());
        }
    }
}
