//! Enumeration of homomorphisms into symmetric groups by pruned
//! backtracking, and the sweep that turns vanishing or degree-deficient
//! twisted polynomials into non-fiberedness certificates.

use std::fmt;
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{SearchError, TwistedError};
use crate::presentation::GroupPresentation;
use crate::twisted::{fk_degree_test, Perm, PermRep, TwistedSetup};

/// Configuration of a representation search.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Degree of the symmetric group searched.
    pub degree: usize,
    /// Primes to sweep, cheapest first.
    pub primes: Vec<u64>,
    /// Use the relator-driven assignment order (default) or the
    /// presentation order of the generators.
    pub relator_driven_order: bool,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    /// Verify mode: sweep only this representation.
    pub seed: Option<PermRep>,
    pub stop_at_first: bool,
    /// Fix the first assigned generator's image to a canonical
    /// representative of its cycle type.
    pub conjugacy_reduction: bool,
    /// Thurston norm of the class, enabling degree-mismatch certificates.
    pub norm: Option<i64>,
    pub parallel: bool,
}

impl SearchConfig {
    pub fn new(degree: usize, primes: Vec<u64>) -> Result<Self, SearchError> {
        if degree == 0 {
            return Err(SearchError::BadConfig("degree must be at least 1".into()));
        }
        if primes.is_empty() {
            return Err(SearchError::BadConfig("at least one prime".into()));
        }
        let mut primes = primes;
        primes.sort_unstable();
        primes.dedup();
        Ok(SearchConfig {
            degree,
            primes,
            relator_driven_order: true,
            node_budget: None,
            time_budget: None,
            seed: None,
            stop_at_first: false,
            conjugacy_reduction: false,
            norm: None,
            parallel: false,
        })
    }
}

/// Progress counters of a search.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct SearchStats {
    /// Partial assignments tried.
    pub nodes: u64,
    /// Complete homomorphisms found.
    pub homs: u64,
    /// Assignments rejected by a relator check.
    pub pruned: u64,
    pub partitions_done: usize,
    pub partitions: usize,
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} nodes, {} pruned, {} homomorphisms, {}/{} partitions",
            self.nodes, self.pruned, self.homs, self.partitions_done, self.partitions
        )
    }
}

/// Search budget exhausted; carries the progress made.
#[derive(Clone, Copy, Debug)]
pub struct SearchExhausted(pub SearchStats);

/// All permutations of `{1..k}` in lexicographic one-line order.
pub fn all_perms(k: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut line: Vec<usize> = (1..=k).collect();
    loop {
        out.push(Perm::from_one_line(&line).unwrap());
        // next lexicographic permutation
        let Some(i) = (0..k - 1).rev().find(|&i| line[i] < line[i + 1]) else {
            return out;
        };
        let j = (i + 1..k).rev().find(|&j| line[j] > line[i]).unwrap();
        line.swap(i, j);
        line[i + 1..].reverse();
    }
}

/// One canonical representative per cycle type of the symmetric group,
/// larger cycles first; the identity comes last.
pub fn cycle_type_representatives(k: usize) -> Vec<Perm> {
    let mut parts = Vec::new();
    descending_partitions(k, k, &mut Vec::new(), &mut parts);
    parts
        .into_iter()
        .map(|part| {
            let mut line: Vec<usize> = (1..=k).collect();
            let mut start = 0usize;
            for len in part {
                // a cycle on start..start+len: each position maps to the next
                for i in 0..len {
                    line[start + i] = start + 1 + ((i + 1) % len);
                }
                start += len;
            }
            Perm::from_one_line(&line).unwrap()
        })
        .collect()
}

fn descending_partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(cur.clone());
        return;
    }
    for first in (1..=n.min(max)).rev() {
        cur.push(first);
        descending_partitions(n - first, first, cur, out);
        cur.pop();
    }
}

/// Assignment order: greedily pick the generator completing the most
/// still-open relators, tie-broken by total relator membership and then
/// by presentation order.
fn assignment_order(g: &GroupPresentation) -> Vec<usize> {
    let n = g.num_generators();
    let gen_sets: Vec<Vec<usize>> = g
        .relators
        .iter()
        .map(|r| {
            let mut gens: Vec<usize> = r.0.iter().map(|l| l.gen).collect();
            gens.sort_unstable();
            gens.dedup();
            gens
        })
        .collect();
    let membership: Vec<usize> = (0..n)
        .map(|j| gen_sets.iter().filter(|s| s.contains(&j)).count())
        .collect();
    let mut assigned = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let best = (0..n)
            .filter(|&j| !assigned[j])
            .max_by_key(|&j| {
                let completes = gen_sets
                    .iter()
                    .filter(|s| s.contains(&j) && s.iter().all(|&g| g == j || assigned[g]))
                    .count();
                (completes, membership[j], std::cmp::Reverse(j))
            })
            .unwrap();
        assigned[best] = true;
        order.push(best);
    }
    order
}

/// Backtracking enumeration of all homomorphisms into `S_k`: a stream of
/// representations. A partial assignment is pruned as soon as any relator
/// whose generators are all assigned fails to evaluate to the identity.
pub struct HomSearch<'g> {
    group: &'g GroupPresentation,
    order: Vec<usize>,
    candidates: Vec<Vec<Perm>>,
    /// Relators checkable once the generator at this depth is assigned.
    check_at: Vec<Vec<usize>>,
    images: Vec<Option<Perm>>,
    pos: Vec<usize>,
    depth: usize,
    stats: SearchStats,
    node_budget: Option<u64>,
    deadline: Option<Instant>,
    /// Shared counters when running partitioned.
    shared_nodes: Option<std::sync::Arc<AtomicU64>>,
    stop_flag: Option<std::sync::Arc<AtomicBool>>,
    state: SearchState,
}

#[derive(PartialEq)]
enum SearchState {
    Running,
    Exhausted,
    Done,
}

impl<'g> HomSearch<'g> {
    pub fn new(g: &'g GroupPresentation, cfg: &SearchConfig) -> Self {
        let order = if cfg.relator_driven_order {
            assignment_order(g)
        } else {
            (0..g.num_generators()).collect()
        };
        let everything = all_perms(cfg.degree);
        let mut candidates: Vec<Vec<Perm>> = vec![everything; g.num_generators().max(1)];
        if cfg.conjugacy_reduction && !candidates.is_empty() {
            candidates[0] = cycle_type_representatives(cfg.degree);
        }
        Self::with_candidates(g, order, candidates, cfg)
    }

    fn with_candidates(
        g: &'g GroupPresentation,
        order: Vec<usize>,
        candidates: Vec<Vec<Perm>>,
        cfg: &SearchConfig,
    ) -> Self {
        let n = g.num_generators();
        let mut seen = vec![false; n];
        let mut check_at = vec![Vec::new(); n.max(1)];
        for (depth, &gen) in order.iter().enumerate() {
            seen[gen] = true;
            for (ri, r) in g.relators.iter().enumerate() {
                let gens: Vec<usize> = r.0.iter().map(|l| l.gen).collect();
                if gens.contains(&gen) && gens.iter().all(|&x| seen[x]) {
                    check_at[depth].push(ri);
                }
            }
        }
        HomSearch {
            group: g,
            order,
            candidates,
            check_at,
            images: vec![None; n],
            pos: vec![0; n.max(1)],
            depth: 0,
            stats: SearchStats::default(),
            node_budget: cfg.node_budget,
            deadline: cfg.time_budget.map(|d| Instant::now() + d),
            shared_nodes: None,
            stop_flag: None,
            state: SearchState::Running,
        }
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    fn over_budget(&self) -> bool {
        if let Some(b) = self.node_budget {
            let nodes = match &self.shared_nodes {
                Some(shared) => shared.load(Ordering::Relaxed),
                None => self.stats.nodes,
            };
            if nodes > b {
                return true;
            }
        }
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return true;
            }
        }
        false
    }

    fn relators_hold(&self, depth: usize) -> bool {
        for &ri in &self.check_at[depth] {
            let r = &self.group.relators[ri];
            let mut acc = Perm::identity(self.candidates[0].first().map_or(1, |p| p.degree()));
            for l in &r.0 {
                let img = self.images[l.gen].as_ref().expect("assigned");
                let img = if l.inverse {
                    img.inverse()
                } else {
                    img.clone()
                };
                acc = acc.compose(&img);
            }
            if !acc.is_identity() {
                return false;
            }
        }
        true
    }

    fn current_rep(&self) -> PermRep {
        let degree = self.candidates[0].first().map_or(1, |p| p.degree());
        let mut rep = PermRep::new(degree);
        for (gen, img) in self.images.iter().enumerate() {
            rep.insert(
                &self.group.generators[gen],
                img.clone().expect("complete assignment"),
            );
        }
        rep
    }
}

impl Iterator for HomSearch<'_> {
    type Item = Result<PermRep, SearchExhausted>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.state {
            SearchState::Done | SearchState::Exhausted => return None,
            SearchState::Running => {}
        }
        let n = self.order.len();
        if n == 0 {
            self.state = SearchState::Done;
            let degree = self.candidates[0].first().map_or(1, |p| p.degree());
            return Some(Ok(PermRep::new(degree)));
        }
        loop {
            if let Some(stop) = &self.stop_flag {
                if stop.load(Ordering::Relaxed) {
                    self.state = SearchState::Done;
                    return None;
                }
            }
            if self.over_budget() {
                self.state = SearchState::Exhausted;
                return Some(Err(SearchExhausted(self.stats)));
            }
            if self.pos[self.depth] >= self.candidates[self.depth].len() {
                if self.depth == 0 {
                    self.state = SearchState::Done;
                    return None;
                }
                self.pos[self.depth] = 0;
                self.depth -= 1;
                continue;
            }
            let cand = self.candidates[self.depth][self.pos[self.depth]].clone();
            self.pos[self.depth] += 1;
            self.stats.nodes += 1;
            if let Some(shared) = &self.shared_nodes {
                shared.fetch_add(1, Ordering::Relaxed);
            }
            self.images[self.order[self.depth]] = Some(cand);
            if !self.relators_hold(self.depth) {
                self.stats.pruned += 1;
                continue;
            }
            if self.depth == n - 1 {
                self.stats.homs += 1;
                return Some(Ok(self.current_rep()));
            }
            self.depth += 1;
        }
    }
}

/// Enumerate all homomorphisms (a convenience over the iterator).
pub fn enumerate_homs(
    g: &GroupPresentation,
    cfg: &SearchConfig,
) -> Result<Vec<PermRep>, SearchError> {
    let mut out = Vec::new();
    let mut search = HomSearch::new(g, cfg);
    for item in &mut search {
        match item {
            Ok(rep) => out.push(rep),
            Err(SearchExhausted(stats)) => {
                return Err(SearchError::BudgetExhausted {
                    nodes: stats.nodes,
                    homs: stats.homs,
                    partitions_done: 0,
                    partitions: 1,
                })
            }
        }
    }
    Ok(out)
}

/// Why a representation certifies the obstruction.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertReason {
    Vanishes,
    NonMonic,
    DegreeMismatch,
}

impl fmt::Display for CertReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertReason::Vanishes => write!(f, "vanishes"),
            CertReason::NonMonic => write!(f, "nonmonic"),
            CertReason::DegreeMismatch => write!(f, "degree_mismatch"),
        }
    }
}

impl std::str::FromStr for CertReason {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "vanishes" => Ok(CertReason::Vanishes),
            "nonmonic" => Ok(CertReason::NonMonic),
            "degree_mismatch" => Ok(CertReason::DegreeMismatch),
            other => Err(format!("unknown reason '{other}'")),
        }
    }
}

/// A self-contained, re-verifiable record of one obstruction: the
/// representation, the prime, the polynomial, and the reason.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub presentation_hash: u64,
    /// Character values, one per generator in presentation order.
    pub phi: Vec<i64>,
    pub degree: usize,
    pub prime: u64,
    /// One-line images in presentation order of the generators.
    pub images: Vec<(String, Vec<usize>)>,
    /// Normalized polynomial, `0` for a vanishing one.
    pub polynomial: String,
    pub reason: CertReason,
    /// Present for degree-mismatch certificates.
    pub norm: Option<i64>,
}

impl Certificate {
    pub fn rep(&self) -> Result<PermRep, TwistedError> {
        let mut rep = PermRep::new(self.degree);
        for (name, line) in &self.images {
            let perm = Perm::from_one_line(line).ok_or(TwistedError::Parse {
                line: 0,
                msg: format!("certificate image for '{name}' is not a permutation"),
            })?;
            rep.insert(name, perm);
        }
        Ok(rep)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("presentation: {:016x}\n", self.presentation_hash));
        let phi: Vec<String> = self.phi.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("phi: {}\n", phi.join(" ")));
        out.push_str(&format!("degree: {}\n", self.degree));
        out.push_str(&format!("prime: {}\n", self.prime));
        out.push_str(&format!("reason: {}\n", self.reason));
        if let Some(n) = self.norm {
            out.push_str(&format!("norm: {n}\n"));
        }
        out.push_str(&format!("polynomial: {}\n", self.polynomial));
        for (name, line) in &self.images {
            let l: Vec<String> = line.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("gen {name}: {}\n", l.join(" ")));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Certificate, String> {
        let mut hash = None;
        let mut phi = None;
        let mut degree = None;
        let mut prime = None;
        let mut reason = None;
        let mut norm = None;
        let mut polynomial = None;
        let mut images = Vec::new();
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once(':').ok_or(format!("bad line '{line}'"))?;
            let value = value.trim();
            match key.trim() {
                "presentation" => {
                    hash = Some(u64::from_str_radix(value, 16).map_err(|_| "bad hash".to_string())?)
                }
                "phi" => {
                    phi = Some(
                        value
                            .split_whitespace()
                            .map(|w| w.parse::<i64>())
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|_| "bad phi".to_string())?,
                    )
                }
                "degree" => degree = Some(value.parse().map_err(|_| "bad degree".to_string())?),
                "prime" => prime = Some(value.parse().map_err(|_| "bad prime".to_string())?),
                "reason" => reason = Some(value.parse::<CertReason>()?),
                "norm" => norm = Some(value.parse().map_err(|_| "bad norm".to_string())?),
                "polynomial" => polynomial = Some(value.to_string()),
                key if key.starts_with("gen ") => {
                    let name = key.trim_start_matches("gen ").trim();
                    let line: Vec<usize> = value
                        .split_whitespace()
                        .map(|w| w.parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| "bad image".to_string())?;
                    images.push((name.to_string(), line));
                }
                other => return Err(format!("unknown key '{other}'")),
            }
        }
        Ok(Certificate {
            presentation_hash: hash.ok_or("missing presentation hash")?,
            phi: phi.ok_or("missing phi")?,
            degree: degree.ok_or("missing degree")?,
            prime: prime.ok_or("missing prime")?,
            images,
            polynomial: polynomial.ok_or("missing polynomial")?,
            reason: reason.ok_or("missing reason")?,
            norm,
        })
    }
}

/// FNV-1a hash of the canonical presentation text, the identity a
/// certificate binds to.
pub fn presentation_hash(g: &GroupPresentation) -> u64 {
    let mut text = String::new();
    text.push_str("gens:");
    for name in &g.generators {
        text.push(' ');
        text.push_str(name);
    }
    text.push('\n');
    for r in &g.relators {
        text.push_str(&format!("rel: {}\n", r.display(&g.generators)));
    }
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in text.bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Outcome of an obstruction sweep.
#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub certificates: Vec<Certificate>,
    pub stats: SearchStats,
    /// True when a budget ran out before the search space was finished.
    pub exhausted: bool,
}

/// Resumable progress of a partitioned sweep.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct Checkpoint {
    pub presentation_hash: String,
    pub phi: Vec<i64>,
    pub degree: usize,
    pub primes: Vec<u64>,
    pub completed_partitions: Vec<usize>,
    pub certificates: Vec<String>,
}

fn certificate_for(
    setup: &TwistedSetup,
    rep: &PermRep,
    prime: u64,
    cfg: &SearchConfig,
    hash: u64,
) -> Result<Option<Certificate>, TwistedError> {
    let res = setup.compute(rep, prime)?;
    let make = |reason: CertReason, norm: Option<i64>| {
        let images = setup
            .group
            .generators
            .iter()
            .map(|name| (name.clone(), rep.image(name).unwrap().one_line()))
            .collect();
        Certificate {
            presentation_hash: hash,
            phi: setup.char_values.clone(),
            degree: rep.degree(),
            prime,
            images,
            polynomial: res.delta.to_string(),
            reason,
            norm,
        }
    };
    if res.delta.is_zero() {
        return Ok(Some(make(CertReason::Vanishes, None)));
    }
    if let Some(norm) = cfg.norm {
        let report = fk_degree_test(&res, rep.degree(), norm);
        if report.obstructed {
            return Ok(Some(make(CertReason::DegreeMismatch, Some(norm))));
        }
    }
    Ok(None)
}

/// Sweep every enumerated representation through the prime list and
/// collect obstruction certificates. With a seed representation, only the
/// seed is checked (verify mode). The search tree is partitioned by the
/// first generator's image; partitions run in parallel when configured,
/// and the certificate list is sorted canonically at the end.
pub fn obstruction_sweep(
    g: &GroupPresentation,
    phi: &[i64],
    cfg: &SearchConfig,
) -> Result<SweepOutcome, SearchError> {
    obstruction_sweep_with_checkpoint(g, phi, cfg, None)
}

pub fn obstruction_sweep_with_checkpoint(
    g: &GroupPresentation,
    phi: &[i64],
    cfg: &SearchConfig,
    checkpoint_path: Option<&Path>,
) -> Result<SweepOutcome, SearchError> {
    let hash = presentation_hash(g);
    let setup = TwistedSetup::new(g, phi.to_vec(), None)?;

    if let Some(seed) = &cfg.seed {
        // verify mode
        if !seed.respects(g)? {
            return Err(SearchError::Twisted(TwistedError::NotAHomomorphism));
        }
        let mut certificates = Vec::new();
        for &p in &cfg.primes {
            if let Some(cert) = certificate_for(&setup, seed, p, cfg, hash)? {
                certificates.push(cert);
                if cfg.stop_at_first {
                    break;
                }
            }
        }
        return Ok(SweepOutcome {
            certificates,
            stats: SearchStats {
                nodes: 1,
                homs: 1,
                pruned: 0,
                partitions_done: 1,
                partitions: 1,
            },
            exhausted: false,
        });
    }

    // partition by the first generator's image
    let order = if cfg.relator_driven_order {
        assignment_order(g)
    } else {
        (0..g.num_generators()).collect()
    };
    let first_candidates = if g.num_generators() == 0 {
        vec![Perm::identity(cfg.degree)]
    } else if cfg.conjugacy_reduction {
        cycle_type_representatives(cfg.degree)
    } else {
        all_perms(cfg.degree)
    };
    let partitions = first_candidates.len();

    let mut done_set: Vec<usize> = Vec::new();
    let mut prior_certs: Vec<Certificate> = Vec::new();
    if let Some(path) = checkpoint_path {
        if path.exists() {
            let text = std::fs::read_to_string(path)
                .map_err(|e| SearchError::BadConfig(format!("checkpoint: {e}")))?;
            let cp: Checkpoint = serde_json::from_str(&text)
                .map_err(|e| SearchError::BadConfig(format!("checkpoint: {e}")))?;
            if cp.presentation_hash == format!("{hash:016x}")
                && cp.phi == phi
                && cp.degree == cfg.degree
                && cp.primes == cfg.primes
            {
                done_set = cp.completed_partitions;
                for text in &cp.certificates {
                    prior_certs.push(Certificate::parse(text).map_err(SearchError::BadConfig)?);
                }
            }
        }
    }

    let shared_nodes = std::sync::Arc::new(AtomicU64::new(0));
    let stop = std::sync::Arc::new(AtomicBool::new(false));
    let exhausted_flag = std::sync::Arc::new(AtomicBool::new(false));
    let deadline = cfg.time_budget.map(|d| Instant::now() + d);
    let progress = Mutex::new((done_set.clone(), prior_certs.clone()));

    let run_partition =
        |(idx, first): (usize, &Perm)| -> (usize, Vec<Certificate>, SearchStats, bool) {
            if done_set.contains(&idx) || stop.load(Ordering::Relaxed) {
                return (idx, Vec::new(), SearchStats::default(), false);
            }
            let mut candidates: Vec<Vec<Perm>> =
                vec![all_perms(cfg.degree); g.num_generators().max(1)];
            candidates[0] = vec![first.clone()];
            let mut local_cfg = cfg.clone();
            local_cfg.time_budget = deadline.map(|d| d.saturating_duration_since(Instant::now()));
            let mut search = HomSearch::with_candidates(g, order.clone(), candidates, &local_cfg);
            search.shared_nodes = Some(shared_nodes.clone());
            search.stop_flag = Some(stop.clone());
            let mut certs = Vec::new();
            let mut exhausted = false;
            for item in &mut search {
                match item {
                    Err(SearchExhausted(_)) => {
                        exhausted = true;
                        break;
                    }
                    Ok(rep) => {
                        for &p in &cfg.primes {
                            // the character was validated at setup and the
                            // enumeration only yields homomorphisms, so a
                            // failure here is a logic error, not data
                            let found = certificate_for(&setup, &rep, p, cfg, hash)
                                .expect("twisted computation on an enumerated homomorphism");
                            if let Some(cert) = found {
                                certs.push(cert);
                                if cfg.stop_at_first {
                                    stop.store(true, Ordering::Relaxed);
                                }
                                break;
                            }
                        }
                        if cfg.stop_at_first && !certs.is_empty() {
                            break;
                        }
                    }
                }
            }
            if exhausted {
                exhausted_flag.store(true, Ordering::Relaxed);
            }
            let completed = !exhausted && !stop.load(Ordering::Relaxed);
            if completed {
                if let Some(path) = checkpoint_path {
                    let mut guard = progress.lock().unwrap();
                    guard.0.push(idx);
                    guard.1.extend(certs.iter().cloned());
                    let cp = Checkpoint {
                        presentation_hash: format!("{hash:016x}"),
                        phi: phi.to_vec(),
                        degree: cfg.degree,
                        primes: cfg.primes.clone(),
                        completed_partitions: guard.0.clone(),
                        certificates: guard.1.iter().map(|c| c.to_text()).collect(),
                    };
                    let _ = std::fs::write(path, serde_json::to_string_pretty(&cp).unwrap());
                }
            }
            (idx, certs, search.stats(), completed)
        };

    let results: Vec<(usize, Vec<Certificate>, SearchStats, bool)> = if cfg.parallel {
        first_candidates
            .par_iter()
            .enumerate()
            .map(run_partition)
            .collect()
    } else {
        first_candidates
            .iter()
            .enumerate()
            .map(run_partition)
            .collect()
    };

    let mut certificates = prior_certs;
    let mut stats = SearchStats {
        partitions,
        partitions_done: done_set.len(),
        ..SearchStats::default()
    };
    for (idx, certs, s, completed) in results {
        let _ = idx;
        certificates.extend(certs);
        stats.nodes += s.nodes;
        stats.homs += s.homs;
        stats.pruned += s.pruned;
        if completed {
            stats.partitions_done += 1;
        }
    }
    certificates.sort_by(|a, b| {
        (a.prime, &a.images, a.reason as u8).cmp(&(b.prime, &b.images, b.reason as u8))
    });
    certificates.dedup();
    Ok(SweepOutcome {
        certificates,
        stats,
        exhausted: exhausted_flag.load(Ordering::Relaxed),
    })
}

/// Does a freshly computed result reproduce a stored certificate? The
/// prime is part of the certificate's identity: a result computed at a
/// different prime never matches.
pub fn certificate_matches(cert: &Certificate, res: &crate::twisted::TwistedResult) -> bool {
    if res.prime != cert.prime || res.delta.to_string() != cert.polynomial {
        return false;
    }
    match cert.reason {
        CertReason::Vanishes | CertReason::NonMonic => res.delta.is_zero(),
        CertReason::DegreeMismatch => match cert.norm {
            None => false,
            Some(norm) => !res.delta.is_zero() && fk_degree_test(res, cert.degree, norm).obstructed,
        },
    }
}

/// Recompute a certificate from scratch and compare: true iff the stored
/// representation is a homomorphism of this presentation, the character
/// matches, and the polynomial and reason reproduce at the stored prime.
pub fn verify_certificate(g: &GroupPresentation, phi: &[i64], cert: &Certificate) -> bool {
    if cert.presentation_hash != presentation_hash(g) || cert.phi != phi {
        return false;
    }
    let Ok(rep) = cert.rep() else { return false };
    if rep.degree() != cert.degree {
        return false;
    }
    match rep.respects(g) {
        Ok(true) => {}
        _ => return false,
    }
    let Ok(setup) = TwistedSetup::new(g, phi.to_vec(), None) else {
        return false;
    };
    let Ok(res) = setup.compute(&rep, cert.prime) else {
        return false;
    };
    certificate_matches(cert, &res)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = include_str!("../fixtures/groups/trefoil.grp");
    const NECKLACE: &str = include_str!("../fixtures/groups/necklace.grp");
    const PI1_K: &str = include_str!("../fixtures/groups/pi1_k.grp");
    const ALPHA_K: &str = include_str!("../fixtures/reps/alpha_k.rep");

    fn group(text: &str) -> GroupPresentation {
        GroupPresentation::parse(text).unwrap()
    }

    fn char_for(g: &GroupPresentation, phi: &[i64]) -> Vec<i64> {
        g.abelianize().unwrap().class_as_char(phi).unwrap()
    }

    #[test]
    fn all_perms_count_and_order() {
        assert_eq!(all_perms(1).len(), 1);
        assert_eq!(all_perms(3).len(), 6);
        assert_eq!(all_perms(5).len(), 120);
        let p3 = all_perms(3);
        assert!(p3[0].is_identity());
        assert_eq!(p3[5].one_line(), vec![3, 2, 1]);
    }

    #[test]
    fn cycle_type_reps_of_s5() {
        let reps = cycle_type_representatives(5);
        // one per partition of 5
        assert_eq!(reps.len(), 7);
        assert!(reps.last().unwrap().is_identity());
        let mut types: Vec<Vec<usize>> = reps.iter().map(|p| p.cycle_type()).collect();
        types.dedup();
        assert_eq!(types.len(), 7);
    }

    #[test]
    fn trefoil_homs_match_brute_force() {
        let g = group(TREFOIL);
        let cfg = SearchConfig::new(3, vec![5]).unwrap();
        let homs = enumerate_homs(&g, &cfg).unwrap();
        // brute force over all 36 pairs
        let perms = all_perms(3);
        let mut expected = Vec::new();
        for x in &perms {
            for y in &perms {
                let xyx = x.compose(y).compose(x);
                let yxy = y.compose(x).compose(y);
                if xyx == yxy {
                    let mut rep = PermRep::new(3);
                    rep.insert("x", x.clone());
                    rep.insert("y", y.clone());
                    expected.push(rep);
                }
            }
        }
        assert_eq!(homs.len(), expected.len());
        for rep in &expected {
            assert!(homs.contains(rep), "missing {rep:?}");
        }
        // the dihedral assignment is among them
        let mut dihedral = PermRep::new(3);
        dihedral.insert("x", Perm::from_one_line(&[2, 1, 3]).unwrap());
        dihedral.insert("y", Perm::from_one_line(&[3, 2, 1]).unwrap());
        assert!(homs.contains(&dihedral));
        // every yielded representation is a homomorphism
        for rep in &homs {
            assert!(rep.respects(&g).unwrap());
        }
    }

    #[test]
    fn necklace_homs_match_brute_force() {
        let g = group(NECKLACE);
        let cfg = SearchConfig::new(3, vec![5]).unwrap();
        let homs = enumerate_homs(&g, &cfg).unwrap();
        let perms = all_perms(3);
        let mut count = 0;
        for n in &perms {
            for s in &perms {
                for t in &perms {
                    if n.compose(s) == s.compose(n) && n.compose(t) == t.compose(n) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(homs.len(), count);
    }

    #[test]
    fn into_s1_only_trivial() {
        let g = group(PI1_K);
        let cfg = SearchConfig::new(1, vec![5]).unwrap();
        let homs = enumerate_homs(&g, &cfg).unwrap();
        assert_eq!(homs.len(), 1);
    }

    #[test]
    fn pruning_skips_nothing() {
        // relator-driven pruned order vs plain presentation order
        let g = group(TREFOIL);
        let mut cfg = SearchConfig::new(3, vec![5]).unwrap();
        let pruned = enumerate_homs(&g, &cfg).unwrap();
        cfg.relator_driven_order = false;
        let plain = enumerate_homs(&g, &cfg).unwrap();
        assert_eq!(pruned.len(), plain.len());
        for rep in &plain {
            assert!(pruned.contains(rep));
        }
    }

    #[test]
    fn budget_exhaustion_reports_progress() {
        let g = group(PI1_K);
        let mut cfg = SearchConfig::new(4, vec![5]).unwrap();
        cfg.node_budget = Some(50);
        match enumerate_homs(&g, &cfg) {
            Err(SearchError::BudgetExhausted { nodes, .. }) => assert!(nodes >= 50),
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn stream_contains_published_assignment() {
        // the degree-5 fixture representation appears in the search stream
        let g = group(PI1_K);
        let target = PermRep::parse(ALPHA_K).unwrap();
        let mut reference = PermRep::new(5);
        for name in &g.generators {
            reference.insert(name, target.image(name).unwrap().clone());
        }
        let cfg = SearchConfig::new(5, vec![5]).unwrap();
        let mut found = false;
        for item in HomSearch::new(&g, &cfg) {
            let rep = item.expect("no budget set");
            if rep == reference {
                found = true;
                break;
            }
        }
        assert!(found);
    }

    #[test]
    fn sweep_verify_mode_on_k() {
        let g = group(PI1_K);
        let phi = char_for(&g, &[1]);
        let mut cfg = SearchConfig::new(5, vec![5, 7]).unwrap();
        cfg.seed = Some(PermRep::parse(ALPHA_K).unwrap());
        cfg.stop_at_first = true;
        let outcome = obstruction_sweep(&g, &phi, &cfg).unwrap();
        assert_eq!(outcome.certificates.len(), 1);
        let cert = &outcome.certificates[0];
        assert_eq!(cert.reason, CertReason::Vanishes);
        assert_eq!(cert.prime, 5);
        assert!(verify_certificate(&g, &phi, cert));
    }

    #[test]
    fn trefoil_sweep_finds_nothing() {
        let g = group(TREFOIL);
        let phi = char_for(&g, &[1]);
        let mut cfg = SearchConfig::new(1, vec![5, 7, 13]).unwrap();
        cfg.norm = Some(1);
        let outcome = obstruction_sweep(&g, &phi, &cfg).unwrap();
        assert!(outcome.certificates.is_empty());
        assert!(!outcome.exhausted);
        assert_eq!(outcome.stats.homs, 1);
    }

    #[test]
    fn sweep_is_deterministic_across_runs() {
        // the certificate list is identical run to run, parallel or not
        let g = group(TREFOIL);
        let phi = char_for(&g, &[1]);
        let mut cfg = SearchConfig::new(3, vec![5, 7]).unwrap();
        cfg.norm = Some(1);
        let a = obstruction_sweep(&g, &phi, &cfg).unwrap();
        let b = obstruction_sweep(&g, &phi, &cfg).unwrap();
        cfg.parallel = true;
        let c = obstruction_sweep(&g, &phi, &cfg).unwrap();
        assert_eq!(a.certificates, b.certificates);
        assert_eq!(a.certificates, c.certificates);
        assert_eq!(a.stats.homs, c.stats.homs);
    }

    #[test]
    fn certificate_roundtrip_and_corruption() {
        let g = group(PI1_K);
        let phi = char_for(&g, &[1]);
        let mut cfg = SearchConfig::new(5, vec![5]).unwrap();
        cfg.seed = Some(PermRep::parse(ALPHA_K).unwrap());
        let outcome = obstruction_sweep(&g, &phi, &cfg).unwrap();
        let cert = &outcome.certificates[0];

        let text = cert.to_text();
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(*cert, back);
        assert!(verify_certificate(&g, &phi, &back));

        // corrupt an image
        let mut bad = cert.clone();
        bad.images[0].1.swap(0, 1);
        assert!(!verify_certificate(&g, &phi, &bad));

        // a rerun at a different prime never matches the stored record
        let setup = TwistedSetup::new(&g, phi.clone(), None).unwrap();
        let rep = cert.rep().unwrap();
        let at_three = setup.compute(&rep, 3).unwrap();
        assert!(!certificate_matches(cert, &at_three));
        let at_five = setup.compute(&rep, 5).unwrap();
        assert!(certificate_matches(cert, &at_five));
    }
}
