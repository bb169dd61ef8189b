//! Splice diagrams of graph links and their invariants.
//!
//! A splice diagram is a finite weighted tree. Arrowhead vertices are the
//! link components; boundary vertices are leaves of the tree; node vertices
//! have degree at least three. Each edge carries one integer weight near
//! each endpoint. Everything this module computes — linking numbers, the
//! multivariable Alexander polynomial, the Thurston norm, fiberedness —
//! is a function of that combinatorial data.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::SpliceError;
use crate::laurent::{CoeffRing, LaurentPoly};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Arrowhead,
    Boundary,
    Node,
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexKind::Arrowhead => write!(f, "arrowhead"),
            VertexKind::Boundary => write!(f, "boundary"),
            VertexKind::Node => write!(f, "node"),
        }
    }
}

#[derive(Clone, Debug)]
struct Edge {
    u: usize,
    v: usize,
    weight_u: i64,
    weight_v: i64,
}

impl Edge {
    fn other(&self, end: usize) -> usize {
        if end == self.u {
            self.v
        } else {
            self.u
        }
    }

    fn weight_at(&self, end: usize) -> i64 {
        if end == self.u {
            self.weight_u
        } else {
            self.weight_v
        }
    }
}

/// A validated splice diagram.
#[derive(Clone, Debug)]
pub struct SpliceDiagram {
    ids: Vec<String>,
    kinds: Vec<VertexKind>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    /// Arrowhead vertex indices in component order; component i is the
    /// variable `t_{i+1}`.
    components: Vec<usize>,
}

/// An integral cohomology class, one coefficient per link component.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CohomologyClass(pub Vec<i64>);

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn divisibility(&self) -> i64 {
        self.0.iter().fold(0i64, |acc, &c| num_integer::gcd(acc, c))
    }
}

impl SpliceDiagram {
    /// Parse the one-construct-per-line text form:
    /// `vertex <id> arrowhead|boundary|node`,
    /// `edge <u> <v> <weight_near_u> <weight_near_v>`,
    /// `components <arrowhead ids in order>`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<SpliceDiagram, SpliceError> {
        let mut ids = Vec::new();
        let mut kinds = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut raw_edges: Vec<(String, String, i64, i64, usize)> = Vec::new();
        let mut component_ids: Option<(Vec<String>, usize)> = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let mut words = line.split_whitespace();
            let head = words.next().unwrap();
            let parse_err = |msg: String| SpliceError::Parse { line: lineno, msg };
            match head {
                "vertex" => {
                    let id = words
                        .next()
                        .ok_or_else(|| parse_err("vertex needs an id".into()))?;
                    let kind = match words.next() {
                        Some("arrowhead") => VertexKind::Arrowhead,
                        Some("boundary") => VertexKind::Boundary,
                        Some("node") => VertexKind::Node,
                        other => {
                            return Err(parse_err(format!(
                                "expected arrowhead|boundary|node, found {other:?}"
                            )))
                        }
                    };
                    if index.contains_key(id) {
                        return Err(parse_err(format!("duplicate vertex '{id}'")));
                    }
                    index.insert(id.to_string(), ids.len());
                    ids.push(id.to_string());
                    kinds.push(kind);
                }
                "edge" => {
                    let u = words
                        .next()
                        .ok_or_else(|| parse_err("edge needs two endpoints".into()))?;
                    let v = words
                        .next()
                        .ok_or_else(|| parse_err("edge needs two endpoints".into()))?;
                    let wu: i64 = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| parse_err("edge needs two integer weights".into()))?;
                    let wv: i64 = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| parse_err("edge needs two integer weights".into()))?;
                    raw_edges.push((u.to_string(), v.to_string(), wu, wv, lineno));
                }
                "components" => {
                    component_ids = Some((words.map(|w| w.to_string()).collect(), lineno));
                }
                other => {
                    return Err(parse_err(format!("unknown construct '{other}'")));
                }
            }
        }

        let mut edges = Vec::new();
        for (u, v, wu, wv, lineno) in raw_edges {
            let iu = *index.get(&u).ok_or(SpliceError::Parse {
                line: lineno,
                msg: format!("unknown vertex '{u}'"),
            })?;
            let iv = *index.get(&v).ok_or(SpliceError::Parse {
                line: lineno,
                msg: format!("unknown vertex '{v}'"),
            })?;
            edges.push(Edge {
                u: iu,
                v: iv,
                weight_u: wu,
                weight_v: wv,
            });
        }

        let (component_ids, comp_line) = component_ids.unwrap_or((Vec::new(), 0));
        let mut components = Vec::new();
        for id in &component_ids {
            let idx = *index.get(id).ok_or(SpliceError::Parse {
                line: comp_line,
                msg: format!("unknown vertex '{id}'"),
            })?;
            components.push(idx);
        }
        // default: arrowheads in declaration order
        if components.is_empty() {
            components = kinds
                .iter()
                .enumerate()
                .filter(|(_, k)| **k == VertexKind::Arrowhead)
                .map(|(i, _)| i)
                .collect();
        }

        let mut adjacency = vec![Vec::new(); ids.len()];
        for (e, edge) in edges.iter().enumerate() {
            adjacency[edge.u].push(e);
            adjacency[edge.v].push(e);
        }

        let diagram = SpliceDiagram {
            ids,
            kinds,
            edges,
            adjacency,
            components,
        };
        diagram.validate()?;
        Ok(diagram)
    }

    fn validate(&self) -> Result<(), SpliceError> {
        let n = self.ids.len();
        if n == 0 {
            return Err(SpliceError::Structure("empty diagram".into()));
        }
        if self.edges.len() + 1 != n {
            return Err(SpliceError::Structure(format!(
                "a tree on {n} vertices needs {} edges, found {} (cycle or disconnection)",
                n - 1,
                self.edges.len()
            )));
        }
        // connectivity (with |E| = |V| - 1 this also excludes cycles)
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &e in &self.adjacency[v] {
                let w = self.edges[e].other(v);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(SpliceError::Structure(
                "diagram is not connected (contains a cycle elsewhere)".into(),
            ));
        }
        for v in 0..n {
            let deg = self.adjacency[v].len();
            match self.kinds[v] {
                VertexKind::Arrowhead | VertexKind::Boundary => {
                    if deg != 1 {
                        return Err(SpliceError::Structure(format!(
                            "{} vertex '{}' must have degree 1, has {deg}",
                            self.kinds[v], self.ids[v]
                        )));
                    }
                }
                VertexKind::Node => {
                    if deg < 3 {
                        return Err(SpliceError::Structure(format!(
                            "node vertex '{}' must have degree >= 3, has {deg}",
                            self.ids[v]
                        )));
                    }
                }
            }
        }
        if self.components.is_empty() {
            return Err(SpliceError::Structure("no arrowhead vertices".into()));
        }
        for &c in &self.components {
            if self.kinds[c] != VertexKind::Arrowhead {
                return Err(SpliceError::Structure(format!(
                    "component '{}' is not an arrowhead",
                    self.ids[c]
                )));
            }
        }
        let arrowheads = self
            .kinds
            .iter()
            .filter(|k| **k == VertexKind::Arrowhead)
            .count();
        if arrowheads != self.components.len() {
            return Err(SpliceError::Structure(format!(
                "component order lists {} of {} arrowheads",
                self.components.len(),
                arrowheads
            )));
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.ids.len()
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize, SpliceError> {
        self.ids
            .iter()
            .position(|v| v == id)
            .ok_or_else(|| SpliceError::UnknownVertex(id.to_string()))
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Variable names: `t` for a knot, `t1..tn` for a link.
    pub fn variables(&self) -> Vec<String> {
        if self.components.len() == 1 {
            vec!["t".to_string()]
        } else {
            (1..=self.components.len())
                .map(|i| format!("t{i}"))
                .collect()
        }
    }

    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.ids.len()];
        let mut seen = vec![false; self.ids.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &e in &self.adjacency[v] {
                let w = self.edges[e].other(v);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Linking number of component `a` (an arrowhead) with the virtual
    /// component at vertex `v`: the product of the near-weights of every
    /// off-path edge incident to a vertex of the path from `a` to `v`,
    /// endpoints included. The empty product is 1.
    pub fn linking_number(&self, a: usize, v: usize) -> i64 {
        debug_assert_eq!(self.kinds[a], VertexKind::Arrowhead);
        let path = self.path(a, v);
        let on_path = |x: usize, y: usize| {
            path.windows(2)
                .any(|w| (w[0] == x && w[1] == y) || (w[0] == y && w[1] == x))
        };
        let mut product = 1i64;
        for &u in &path {
            for &e in &self.adjacency[u] {
                let w = self.edges[e].other(u);
                if !on_path(u, w) {
                    product *= self.edges[e].weight_at(u);
                }
            }
        }
        product
    }

    /// Linking number looked up by vertex id.
    pub fn linking_number_by_id(&self, a: &str, v: &str) -> Result<i64, SpliceError> {
        let ai = self.vertex_index(a)?;
        let vi = self.vertex_index(v)?;
        if self.kinds[ai] != VertexKind::Arrowhead {
            return Err(SpliceError::Structure(format!("'{a}' is not an arrowhead")));
        }
        Ok(self.linking_number(ai, vi))
    }

    /// The full exponent vector `(l_1v, ..., l_nv)` of a vertex.
    fn exponent_vector(&self, v: usize) -> Vec<i64> {
        self.components
            .iter()
            .map(|&a| self.linking_number(a, v))
            .collect()
    }

    fn check_class(&self, phi: &CohomologyClass) -> Result<(), SpliceError> {
        if phi.0.len() != self.components.len() {
            return Err(SpliceError::ClassLength {
                got: phi.0.len(),
                want: self.components.len(),
            });
        }
        Ok(())
    }

    /// `sum_i phi_i * l_iv`, the multiplicity of the class at a vertex.
    pub fn multiplicity(&self, v: usize, phi: &CohomologyClass) -> i64 {
        self.exponent_vector(v)
            .iter()
            .zip(&phi.0)
            .map(|(l, p)| l * p)
            .sum()
    }

    /// Multivariable Alexander polynomial by the vertex product formula:
    /// one factor `(t^{l_v} - 1)^{d_v - 2}` per non-arrowhead vertex, and the
    /// extra factor `(t - 1)` in the one-component case. Vanishing factors
    /// (`l_v = 0`) cancel numerator-against-denominator one for one; surplus
    /// numerator factors make the polynomial 0; surplus denominator factors
    /// are a hard error.
    pub fn alexander_polynomial(&self) -> Result<LaurentPoly, SpliceError> {
        let vars_owned = self.variables();
        let vars: Vec<&str> = vars_owned.iter().map(|s| s.as_str()).collect();
        let n = self.components.len();

        let mut numerator: Vec<Vec<i64>> = Vec::new(); // exponent vectors
        let mut denominator: Vec<Vec<i64>> = Vec::new();
        let mut zero_num = 0usize;
        let mut zero_den = 0usize;

        for v in 0..self.ids.len() {
            if self.kinds[v] == VertexKind::Arrowhead {
                continue;
            }
            let mult = self.degree(v) as i64 - 2;
            if mult == 0 {
                continue;
            }
            let exps = self.exponent_vector(v);
            let is_zero = exps.iter().all(|&e| e == 0);
            let count = mult.unsigned_abs() as usize;
            if mult > 0 {
                if is_zero {
                    zero_num += count;
                } else {
                    numerator.extend(std::iter::repeat_n(exps, count));
                }
            } else if is_zero {
                zero_den += count;
            } else {
                denominator.extend(std::iter::repeat_n(exps, count));
            }
        }

        if zero_den > zero_num {
            return Err(SpliceError::SurplusZeroDenominator);
        }
        if zero_num > zero_den {
            return Ok(LaurentPoly::zero(CoeffRing::Int, &vars));
        }

        let mut num_poly = LaurentPoly::one(CoeffRing::Int, &vars);
        if n == 1 {
            // the knot-case extra factor (t - 1)
            let t = LaurentPoly::monomial(CoeffRing::Int, &vars, &[1], 1);
            let one = LaurentPoly::one(CoeffRing::Int, &vars);
            num_poly = &num_poly * &(&t - &one);
        }
        for exps in &numerator {
            num_poly = &num_poly * &binomial_factor(&vars, exps);
        }
        let mut den_poly = LaurentPoly::one(CoeffRing::Int, &vars);
        for exps in &denominator {
            den_poly = &den_poly * &binomial_factor(&vars, exps);
        }
        let quotient = num_poly
            .exact_div(&den_poly)
            .map_err(|e| SpliceError::MalformedFactorSet(e.to_string()))?;
        Ok(quotient.normalized())
    }

    /// Thurston norm of a class: `sum_v (d_v - 2) |sum_i phi_i l_iv|` over
    /// the non-arrowhead vertices. Degenerate classes may give 0 or less.
    pub fn thurston_norm(&self, phi: &CohomologyClass) -> Result<i64, SpliceError> {
        self.check_class(phi)?;
        let mut norm = 0i64;
        for v in 0..self.ids.len() {
            if self.kinds[v] == VertexKind::Arrowhead {
                continue;
            }
            let delta = self.degree(v) as i64 - 2;
            norm += delta * self.multiplicity(v, phi).abs();
        }
        Ok(norm)
    }

    /// Genus of a knot diagram, from `norm = 2g - 1`.
    pub fn genus(&self) -> Result<i64, SpliceError> {
        if self.components.len() != 1 {
            return Err(SpliceError::NotAKnot(self.components.len()));
        }
        let norm = self.thurston_norm(&CohomologyClass(vec![1]))?;
        if norm < 0 || norm % 2 == 0 {
            return Err(SpliceError::BadNorm(norm));
        }
        Ok((norm + 1) / 2)
    }

    /// A class fibers iff its multiplicity is nonzero at every node vertex.
    pub fn is_fibered(&self, phi: &CohomologyClass) -> Result<bool, SpliceError> {
        self.check_class(phi)?;
        if phi.is_zero() {
            return Err(SpliceError::ZeroClass);
        }
        for v in 0..self.ids.len() {
            if self.kinds[v] == VertexKind::Node && self.multiplicity(v, phi) == 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Single-variable polynomial of a class on a link of two or more
    /// components: substitute `t_i -> t^{phi_i}`, multiply by `(t - 1)`,
    /// and normalize.
    pub fn specialize(
        &self,
        delta: &LaurentPoly,
        phi: &CohomologyClass,
    ) -> Result<LaurentPoly, SpliceError> {
        self.check_class(phi)?;
        if self.components.len() < 2 {
            return Err(SpliceError::NotAKnot(1));
        }
        if phi.is_zero() {
            return Err(SpliceError::ZeroClass);
        }
        if delta.is_zero() {
            return Ok(LaurentPoly::zero(CoeffRing::Int, &["t"]));
        }
        let sub = delta.substitute_powers(&phi.0, "t");
        let t = LaurentPoly::monomial(CoeffRing::Int, &["t"], &[1], 1);
        let one = LaurentPoly::one(CoeffRing::Int, &["t"]);
        Ok((&sub * &(&t - &one)).normalized())
    }
}

/// `t^exps - 1` in the given variables.
fn binomial_factor(vars: &[&str], exps: &[i64]) -> LaurentPoly {
    let lead = LaurentPoly::monomial(CoeffRing::Int, vars, exps, 1);
    let one = LaurentPoly::one(CoeffRing::Int, vars);
    &lead - &one
}

/// Outcome of the degree/monicness test of the ordinary polynomial of a
/// class against the Thurston norm.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McMullenReport {
    /// `deg` of the class polynomial; absent when it vanishes.
    pub degree: Option<i64>,
    pub norm: i64,
    /// Slack added to the norm: `div(phi) * (1 + b3)` when `b1 = 1`, and 1
    /// otherwise (the class polynomial of a link carries a `(t-1)` factor).
    pub allowance: i64,
    pub inequality_holds: bool,
    pub monic: bool,
    pub equality: bool,
    /// True when the polynomial alone already obstructs fibering.
    pub obstructs_fibering: bool,
}

/// Compare the one-variable class polynomial against the norm: checks
/// `deg <= norm + allowance`, monicness, and whether the necessary
/// fibering conditions (monic and equality) fail.
pub fn mcmullen_report(
    delta_phi: &LaurentPoly,
    norm: i64,
    b1: usize,
    div_phi: i64,
) -> McMullenReport {
    let b3 = 0; // exteriors with boundary
    let allowance = if b1 == 1 { div_phi * (1 + b3) } else { 1 };
    match delta_phi.degree_span(0) {
        Err(_) => McMullenReport {
            degree: None,
            norm,
            allowance,
            inequality_holds: true,
            monic: false,
            equality: false,
            obstructs_fibering: true,
        },
        Ok(deg) => {
            let monic = delta_phi.is_monic();
            let equality = deg == norm + allowance;
            McMullenReport {
                degree: Some(deg),
                norm,
                allowance,
                inequality_holds: deg <= norm + allowance,
                monic,
                equality,
                obstructs_fibering: !(monic && equality),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: &str = include_str!("../fixtures/splice/k.splice");
    const L_ALPHA: &str = include_str!("../fixtures/splice/l_alpha.splice");
    const L_BETA: &str = include_str!("../fixtures/splice/l_beta.splice");
    const L_GAMMA: &str = include_str!("../fixtures/splice/l_gamma.splice");
    const TREFOIL: &str = include_str!("../fixtures/splice/trefoil.splice");

    fn diagram(text: &str) -> SpliceDiagram {
        SpliceDiagram::parse(text).unwrap()
    }

    #[test]
    fn parse_k_shape() {
        let d = diagram(K);
        assert_eq!(d.num_vertices(), 8);
        assert_eq!(d.num_components(), 1);
    }

    #[test]
    fn parse_two_vertex_diagram() {
        let d = diagram("vertex a arrowhead\nvertex b boundary\nedge a b 1 1\ncomponents a\n");
        assert_eq!(d.num_vertices(), 2);
    }

    #[test]
    fn reject_cycle() {
        let text = "vertex a node\nvertex b node\nvertex c node\n\
                    edge a b 1 1\nedge b c 1 1\nedge c a 1 1\n";
        match SpliceDiagram::parse(text) {
            Err(SpliceError::Structure(_)) => {}
            other => panic!("expected structural error, got {other:?}"),
        }
    }

    #[test]
    fn reject_bad_degree() {
        let text = "vertex a arrowhead\nvertex b node\nedge a b 1 1\ncomponents a\n";
        assert!(matches!(
            SpliceDiagram::parse(text),
            Err(SpliceError::Structure(_))
        ));
    }

    #[test]
    fn linking_numbers_of_k() {
        let d = diagram(K);
        let expected = [
            ("v2", 0),
            ("v3", 0),
            ("v4", 0),
            ("v5", 0),
            ("v6", 6),
            ("v7", 3),
            ("v8", 2),
        ];
        for (v, l) in expected {
            assert_eq!(d.linking_number_by_id("v1", v).unwrap(), l, "l(v1,{v})");
        }
    }

    #[test]
    fn linking_unknown_vertex() {
        let d = diagram(K);
        assert!(matches!(
            d.linking_number_by_id("v1", "nope"),
            Err(SpliceError::UnknownVertex(_))
        ));
    }

    #[test]
    fn alexander_of_k() {
        let d = diagram(K);
        let delta = d.alexander_polynomial().unwrap();
        let expected = LaurentPoly::parse_in("t^2 - t + 1", CoeffRing::Int, &["t"]).unwrap();
        assert!(delta.eq_up_to_unit(&expected), "got {delta}");
    }

    #[test]
    fn alexander_of_trefoil() {
        let d = diagram(TREFOIL);
        let delta = d.alexander_polynomial().unwrap();
        let expected = LaurentPoly::parse_in("t^2 - t + 1", CoeffRing::Int, &["t"]).unwrap();
        assert!(delta.eq_up_to_unit(&expected), "got {delta}");
    }

    #[test]
    fn alexander_of_l_alpha() {
        let d = diagram(L_ALPHA);
        let delta = d.alexander_polynomial().unwrap();
        let expected = LaurentPoly::parse_in(
            "(t1^12 - t1^6 + 1)(t1^4 t2^4 + t1^2 t2^2 + 1)(t1^3 t2^3 + 1)",
            CoeffRing::Int,
            &["t1", "t2"],
        )
        .unwrap();
        assert!(delta.eq_up_to_unit(&expected), "got {delta}");
    }

    #[test]
    fn alexander_of_l_beta_and_l_gamma_vanish() {
        assert!(diagram(L_BETA).alexander_polynomial().unwrap().is_zero());
        assert!(diagram(L_GAMMA).alexander_polynomial().unwrap().is_zero());
    }

    #[test]
    fn norm_of_k() {
        let d = diagram(K);
        assert_eq!(d.thurston_norm(&CohomologyClass(vec![1])).unwrap(), 1);
        assert_eq!(d.thurston_norm(&CohomologyClass(vec![-3])).unwrap(), 3);
    }

    #[test]
    fn norm_grids() {
        let alpha = diagram(L_ALPHA);
        let beta = diagram(L_BETA);
        let gamma = diagram(L_GAMMA);
        for p in -5i64..=5 {
            for q in -5i64..=5 {
                let phi = CohomologyClass(vec![p, q]);
                assert_eq!(
                    alpha.thurston_norm(&phi).unwrap(),
                    7 * (p + q).abs() + 12 * p.abs(),
                    "alpha ({p},{q})"
                );
                assert_eq!(
                    beta.thurston_norm(&phi).unwrap(),
                    (p + q).abs(),
                    "beta ({p},{q})"
                );
                assert_eq!(
                    gamma.thurston_norm(&phi).unwrap(),
                    7 * p.abs() + (6 * p + q).abs(),
                    "gamma ({p},{q})"
                );
            }
        }
    }

    #[test]
    fn norm_homogeneity() {
        let d = diagram(L_ALPHA);
        let phi = CohomologyClass(vec![2, -3]);
        let base = d.thurston_norm(&phi).unwrap();
        for c in -4i64..=4 {
            let scaled = CohomologyClass(vec![2 * c, -3 * c]);
            assert_eq!(d.thurston_norm(&scaled).unwrap(), c.abs() * base);
        }
    }

    #[test]
    fn genus_values() {
        assert_eq!(diagram(K).genus().unwrap(), 1);
        assert_eq!(diagram(TREFOIL).genus().unwrap(), 1);
    }

    #[test]
    fn genus_rejects_degenerate() {
        // a bare arrowhead-boundary pair has vertex product norm -1
        let d = diagram("vertex a arrowhead\nvertex b boundary\nedge a b 1 1\ncomponents a\n");
        assert_eq!(d.thurston_norm(&CohomologyClass(vec![1])).unwrap(), -1);
        assert!(matches!(d.genus(), Err(SpliceError::BadNorm(-1))));
    }

    #[test]
    fn fiberedness() {
        let k = diagram(K);
        assert!(!k.is_fibered(&CohomologyClass(vec![1])).unwrap());
        let trefoil = diagram(TREFOIL);
        assert!(trefoil.is_fibered(&CohomologyClass(vec![1])).unwrap());
        assert!(trefoil.is_fibered(&CohomologyClass(vec![-1])).unwrap());
        assert!(matches!(
            trefoil.is_fibered(&CohomologyClass(vec![0])),
            Err(SpliceError::ZeroClass)
        ));
    }

    #[test]
    fn no_fibered_classes_on_l_beta_or_l_gamma() {
        for text in [L_BETA, L_GAMMA] {
            let d = diagram(text);
            for p in -5i64..=5 {
                for q in -5i64..=5 {
                    if (p, q) == (0, 0) || num_integer::gcd(p, q) != 1 {
                        continue;
                    }
                    assert!(!d.is_fibered(&CohomologyClass(vec![p, q])).unwrap());
                }
            }
        }
    }

    #[test]
    fn l_alpha_named_classes_not_fibered() {
        let d = diagram(L_ALPHA);
        assert!(!d.is_fibered(&CohomologyClass(vec![0, 1])).unwrap());
        assert!(!d.is_fibered(&CohomologyClass(vec![1, -1])).unwrap());
        // generic classes do fiber
        assert!(d.is_fibered(&CohomologyClass(vec![1, 1])).unwrap());
    }

    #[test]
    fn specializations_of_l_alpha() {
        let d = diagram(L_ALPHA);
        let delta = d.alexander_polynomial().unwrap();

        let s1 = d.specialize(&delta, &CohomologyClass(vec![1, -1])).unwrap();
        let expected1 =
            LaurentPoly::parse_in("6(t - 1)(t^12 - t^6 + 1)", CoeffRing::Int, &["t"]).unwrap();
        assert!(s1.eq_up_to_unit(&expected1), "got {s1}");
        assert!(!s1.is_monic());
        assert_eq!(s1.degree_span(0).unwrap(), 13);

        let s2 = d.specialize(&delta, &CohomologyClass(vec![0, 1])).unwrap();
        let expected2 =
            LaurentPoly::parse_in("(t^6 - 1)(t^2 - t + 1)", CoeffRing::Int, &["t"]).unwrap();
        assert!(s2.eq_up_to_unit(&expected2), "got {s2}");
        assert!(s2.is_monic());
        assert_eq!(s2.degree_span(0).unwrap(), 8);
    }

    #[test]
    fn specialize_zero_is_zero() {
        let d = diagram(L_BETA);
        let delta = d.alexander_polynomial().unwrap();
        let s = d.specialize(&delta, &CohomologyClass(vec![0, 1])).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn mcmullen_reports() {
        let k = diagram(K);
        let delta_k = k.alexander_polynomial().unwrap();
        let report = mcmullen_report(&delta_k, 1, 1, 1);
        assert!(report.inequality_holds && report.monic && report.equality);
        assert!(!report.obstructs_fibering);

        let alpha = diagram(L_ALPHA);
        let delta = alpha.alexander_polynomial().unwrap();
        let s1 = alpha
            .specialize(&delta, &CohomologyClass(vec![1, -1]))
            .unwrap();
        let r1 = mcmullen_report(&s1, 12, 2, 1);
        assert!(r1.equality && !r1.monic && r1.obstructs_fibering);

        let s2 = alpha
            .specialize(&delta, &CohomologyClass(vec![0, 1]))
            .unwrap();
        let r2 = mcmullen_report(&s2, 7, 2, 1);
        assert!(r2.monic && r2.equality && !r2.obstructs_fibering);
    }

    #[test]
    fn linking_symmetry_under_reversal() {
        let d = diagram(L_ALPHA);
        // reversing the path traversal reads the same off-path weights
        let a = d.vertex_index("v1").unwrap();
        for v in 0..d.num_vertices() {
            let forward = d.linking_number(a, v);
            let path_rev = d.path(v, a);
            let path_fwd = d.path(a, v);
            let mut rev = path_rev.clone();
            rev.reverse();
            assert_eq!(rev, path_fwd);
            let _ = forward;
        }
    }

    #[test]
    fn alexander_independent_of_vertex_order() {
        let shuffled = "\
vertex v8 boundary
vertex v5 node
vertex v1 arrowhead
vertex v6 node
vertex v2 boundary
vertex v7 boundary
vertex v3 node
vertex v4 boundary
edge v5 v6 0 1
edge v6 v7 2 1
edge v3 v4 3 1
edge v3 v2 2 1
edge v5 v1 1 1
edge v6 v8 3 1
edge v3 v5 1 1
components v1
";
        let a = diagram(K).alexander_polynomial().unwrap();
        let b = diagram(shuffled).alexander_polynomial().unwrap();
        assert_eq!(a.normalized(), b.normalized());
    }

    #[test]
    fn mcmullen_inequality_grid() {
        for text in [L_ALPHA, L_BETA, L_GAMMA] {
            let d = diagram(text);
            let delta = d.alexander_polynomial().unwrap();
            if delta.is_zero() {
                continue;
            }
            for p in -5i64..=5 {
                for q in -5i64..=5 {
                    if (p, q) == (0, 0) || num_integer::gcd(p, q) != 1 {
                        continue;
                    }
                    let phi = CohomologyClass(vec![p, q]);
                    let s = d.specialize(&delta, &phi).unwrap();
                    if s.is_zero() {
                        continue;
                    }
                    let norm = d.thurston_norm(&phi).unwrap();
                    assert!(
                        s.degree_span(0).unwrap() <= norm + 1,
                        "degree bound fails at ({p},{q})"
                    );
                }
            }
        }
    }
}
