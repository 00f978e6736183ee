//! The one-inclusion graph: dichotomies of an `(n+1)`-point tuple joined at
//! Hamming distance one, a bounded-out-weight probability assignment found
//! by integer max flow, the transductive prediction rule it induces, and an
//! exact maximum-subgraph-density oracle certifying orientation feasibility.
//!
//! Orientation semantics: `P(v, w)` is the mass the edge `{v, w}` directs
//! away from `v`. At an edge whose two consistent completions are `v` and
//! `w`, the rule predicts `w`'s label with probability `P(v, w)`, so when
//! `v` is the true labeling the error probability is `P(v, w)` and the
//! leave-one-out error is the out-weight of the true vertex over `n+1`.

use crate::domain::{FiniteDomain, PointIdx};
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::hypothesis::FiniteHypothesisClass;
use crate::learner::{LearnerKind, LearnerRule, Outcome, OutcomeLaw, Predictor};
use crate::loss::LossFunction;
use crate::num::{rat_int, Rat};
use crate::sample::Supersample;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use std::sync::Arc;

/// Default cap on vertex count for subset-enumeration density; larger
/// graphs fall back to the parametric flow search.
pub const DEFAULT_DENSITY_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// The single coordinate where the endpoint labelings differ.
    pub coord: usize,
}

#[derive(Debug, Clone)]
pub struct OneInclusionGraph {
    points: Vec<PointIdx>,
    vertices: Vec<Vec<Rat>>,
    index: HashMap<Vec<Rat>, usize>,
    edges: Vec<Edge>,
}

impl OneInclusionGraph {
    /// Builds the graph on the given point tuple (duplicates permitted):
    /// vertices are the class's distinct labelings of the tuple, edges the
    /// Hamming-distance-one pairs.
    pub fn build(class: &FiniteHypothesisClass, points: &[PointIdx]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("one-inclusion graph needs points".into()));
        }
        for p in points {
            if !class.domain().contains(*p) {
                return Err(Error::DomainMismatch(format!(
                    "point index {} outside the class domain",
                    p.0
                )));
            }
        }
        let vertices = class.project_dichotomies(points);
        for v in &vertices {
            for label in v {
                if *label != rat_int(0) && *label != rat_int(1) {
                    return Err(Error::Input(
                        "one-inclusion graphs are defined for binary labelings".into(),
                    ));
                }
            }
        }
        let index: HashMap<Vec<Rat>, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut edges = Vec::new();
        for a in 0..vertices.len() {
            for b in a + 1..vertices.len() {
                let mut diff = None;
                let mut count = 0;
                for (c, (x, y)) in vertices[a].iter().zip(&vertices[b]).enumerate() {
                    if x != y {
                        count += 1;
                        if count > 1 {
                            break;
                        }
                        diff = Some(c);
                    }
                }
                if count == 1 {
                    edges.push(Edge {
                        a,
                        b,
                        coord: diff.unwrap(),
                    });
                }
            }
        }
        Ok(Self {
            points: points.to_vec(),
            vertices,
            index,
            edges,
        })
    }

    pub fn points(&self) -> &[PointIdx] {
        &self.points
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, labeling: &[Rat]) -> Option<usize> {
        self.index.get(labeling).copied()
    }

    /// The at-most-two vertices matching `labels` at every coordinate except
    /// `free`. Errors when no vertex is consistent.
    pub fn consistent_with(&self, labels: &[Rat], free: usize) -> Result<(usize, Option<usize>)> {
        debug_assert_eq!(labels.len(), self.points.len());
        let mut hits: Vec<usize> = Vec::with_capacity(2);
        'outer: for (i, v) in self.vertices.iter().enumerate() {
            for c in 0..labels.len() {
                if c != free && v[c] != labels[c] {
                    continue 'outer;
                }
            }
            hits.push(i);
        }
        match hits.len() {
            0 => Err(Error::NonRealizable(
                "no dichotomy is consistent with the observed labels".into(),
            )),
            1 => Ok((hits[0], None)),
            2 => Ok((hits[0], Some(hits[1]))),
            k => Err(Error::Input(format!(
                "{k} consistent dichotomies; labelings are not binary"
            ))),
        }
    }
}

/// Edge-wise complementary prediction weights; integral when produced by
/// [`orient_bounded`].
#[derive(Debug, Clone)]
pub struct ProbabilityAssignment {
    /// For edge `i = (a, b)`: the mass directed `a -> b`.
    toward_b: Vec<f64>,
}

impl ProbabilityAssignment {
    pub fn new(graph: &OneInclusionGraph, toward_b: Vec<f64>) -> Result<Self> {
        if toward_b.len() != graph.edges.len() {
            return Err(Error::Input("one weight per edge required".into()));
        }
        for &p in &toward_b {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Input(format!("edge weight {p} outside [0,1]")));
            }
        }
        Ok(Self { toward_b })
    }

    /// `P(v, w)`: mass the edge directs away from `v` toward `w`; zero for
    /// non-adjacent pairs and for `v = w`.
    pub fn weight(&self, graph: &OneInclusionGraph, v: usize, w: usize) -> f64 {
        for (e, edge) in graph.edges.iter().enumerate() {
            if edge.a == v && edge.b == w {
                return self.toward_b[e];
            }
            if edge.a == w && edge.b == v {
                return 1.0 - self.toward_b[e];
            }
        }
        0.0
    }

    pub fn out_weight(&self, graph: &OneInclusionGraph, v: usize) -> f64 {
        let mut total = 0.0;
        for (e, edge) in graph.edges.iter().enumerate() {
            if edge.a == v {
                total += self.toward_b[e];
            } else if edge.b == v {
                total += 1.0 - self.toward_b[e];
            }
        }
        total
    }

    /// Exact out-degree for integral assignments.
    pub fn out_degree(&self, graph: &OneInclusionGraph, v: usize) -> u64 {
        let mut total = 0u64;
        for (e, edge) in graph.edges.iter().enumerate() {
            let p = self.toward_b[e];
            debug_assert!(p == 0.0 || p == 1.0, "out_degree needs an integral assignment");
            if (edge.a == v && p == 1.0) || (edge.b == v && p == 0.0) {
                total += 1;
            }
        }
        total
    }

    pub fn max_out_degree(&self, graph: &OneInclusionGraph) -> u64 {
        (0..graph.vertex_count())
            .map(|v| self.out_degree(graph, v))
            .max()
            .unwrap_or(0)
    }
}

/// Finds an integral probability assignment with out-degree at most `d` at
/// every vertex, by max flow on the network source -> edge -> endpoints ->
/// sink(capacity d). Feasible iff the flow saturates all edges, which the
/// density bound guarantees whenever `d` is at least the VC dimension of
/// the projected class.
pub fn orient_bounded(graph: &OneInclusionGraph, d: usize) -> Result<ProbabilityAssignment> {
    let ne = graph.edges.len();
    let nv = graph.vertex_count();
    if ne == 0 {
        return ProbabilityAssignment::new(graph, Vec::new());
    }
    let source = 0usize;
    let edge_base = 1usize;
    let vertex_base = edge_base + ne;
    let sink = vertex_base + nv;
    let mut net = FlowNetwork::new(sink + 1);
    let mut tail_arcs = Vec::with_capacity(ne);
    for (e, edge) in graph.edges.iter().enumerate() {
        net.add_arc(source, edge_base + e, 1);
        let to_a = net.add_arc(edge_base + e, vertex_base + edge.a, 1);
        let to_b = net.add_arc(edge_base + e, vertex_base + edge.b, 1);
        tail_arcs.push((to_a, to_b));
    }
    for v in 0..nv {
        net.add_arc(vertex_base + v, sink, d as i64);
    }
    let value = net.max_flow(source, sink);
    if value != ne as i64 {
        return Err(Error::Infeasible(format!(
            "only {value} of {ne} edges orientable with out-degree cap {d}; \
             the graph's maximum subgraph density exceeds {d}"
        )));
    }
    let mut toward_b = Vec::with_capacity(ne);
    for &(to_a, to_b) in &tail_arcs {
        let tail_is_a = net.flow_on(to_a) == 1;
        debug_assert!(tail_is_a || net.flow_on(to_b) == 1);
        // the absorbing endpoint is the tail: mass points away from it
        toward_b.push(if tail_is_a { 1.0 } else { 0.0 });
    }
    ProbabilityAssignment::new(graph, toward_b)
}

/// Label distribution the rule emits at the free coordinate given the other
/// labels: forced when one completion exists, weighted by the assignment
/// when two do.
pub fn oig_predict(
    graph: &OneInclusionGraph,
    assignment: &ProbabilityAssignment,
    labels: &[Rat],
    free: usize,
) -> Result<Vec<(Rat, f64)>> {
    let (first, second) = graph.consistent_with(labels, free)?;
    match second {
        None => Ok(vec![(graph.vertices[first][free], 1.0)]),
        Some(other) => {
            let p_away_first = assignment.weight(graph, first, other);
            Ok(vec![
                (graph.vertices[first][free], 1.0 - p_away_first),
                (graph.vertices[other][free], p_away_first),
            ])
        }
    }
}

/// Leave-one-out error of the rule when the true labeling is `v_star`:
/// out-weight over `n+1`.
pub fn oig_loo_error(
    graph: &OneInclusionGraph,
    assignment: &ProbabilityAssignment,
    v_star: usize,
) -> Result<f64> {
    if v_star >= graph.vertex_count() {
        return Err(Error::Input(format!("no vertex {v_star}")));
    }
    Ok(assignment.out_weight(graph, v_star) / graph.points.len() as f64)
}

/// Maximum of `|E(W)| / |W|` over nonempty vertex subsets, as an exact
/// rational. Subset enumeration up to `cap` vertices, parametric max-flow
/// search above it.
pub fn max_subgraph_density(graph: &OneInclusionGraph, cap: usize) -> Result<Rat> {
    if graph.edges.is_empty() {
        return Ok(Rat::from_integer(0));
    }
    let nv = graph.vertex_count();
    if nv <= cap {
        Ok(density_by_subsets(graph))
    } else {
        density_by_parametric_flow(graph)
    }
}

fn density_by_subsets(graph: &OneInclusionGraph) -> Rat {
    let nv = graph.vertex_count();
    debug_assert!(nv < 64);
    let mut adj = vec![0u64; nv];
    for edge in &graph.edges {
        adj[edge.a] |= 1 << edge.b;
        adj[edge.b] |= 1 << edge.a;
    }
    let mut best = Rat::from_integer(0);
    for mask in 1u64..(1u64 << nv) {
        let mut twice_edges = 0u32;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            twice_edges += (adj[v] & mask).count_ones();
        }
        let density = Rat::new((twice_edges / 2) as i64, mask.count_ones() as i64);
        if density > best {
            best = density;
        }
    }
    best
}

/// Goldberg's construction: a subgraph denser than `g = a/b` exists iff the
/// min cut of the scaled network is below `b * |E| * |V|`. Binary search
/// narrows the density to within `1/|V|^2`, inside which at most one
/// rational with denominator at most `|V|` lives.
fn density_by_parametric_flow(graph: &OneInclusionGraph) -> Result<Rat> {
    let nv = graph.vertex_count() as i64;
    let ne = graph.edges.len() as i64;
    let mut deg = vec![0i64; nv as usize];
    for edge in &graph.edges {
        deg[edge.a] += 1;
        deg[edge.b] += 1;
    }
    let denser_than = |g: Rat| -> bool {
        let (a, b) = (*g.numer(), *g.denom());
        let source = 0usize;
        let vertex_base = 1usize;
        let sink = vertex_base + nv as usize;
        let mut net = FlowNetwork::new(sink + 1);
        for (v, &dv) in deg.iter().enumerate() {
            net.add_arc(source, vertex_base + v, b * ne);
            net.add_arc(vertex_base + v, sink, b * ne + 2 * a - b * dv);
        }
        for edge in &graph.edges {
            net.add_arc(vertex_base + edge.a, vertex_base + edge.b, b);
            net.add_arc(vertex_base + edge.b, vertex_base + edge.a, b);
        }
        let cut = net.max_flow(source, sink);
        cut < b * ne * nv
    };
    let mut lo = Rat::from_integer(0); // max density is strictly above lo
    let mut hi = Rat::from_integer(ne); // and at most hi
    let gap = Rat::new(1, nv * nv);
    while hi - lo >= gap {
        let mid = (lo + hi) / Rat::from_integer(2);
        if denser_than(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // unique rational with denominator <= |V| in (lo, hi]
    for q in 1..=nv {
        let p = *(hi * Rat::from_integer(q)).floor().numer();
        let cand = Rat::new(p, q);
        if cand > lo && cand <= hi {
            return Ok(cand);
        }
    }
    Err(Error::Input(
        "parametric density search failed to isolate a rational".into(),
    ))
}

/// The one-inclusion graph rule packaged as a transductive learner. The
/// graph and assignment are built from the unlabeled points only, memoized
/// per sorted point multiset so permuted supersamples share one orientation
/// (which also makes predictions permutation-equivariant).
pub struct OigLearner {
    class: Arc<FiniteHypothesisClass>,
    degree_cap: usize,
    memo: RefCell<HashMap<Vec<PointIdx>, Rc<OrientedOig>>>,
}

#[derive(Debug)]
pub struct OrientedOig {
    pub graph: OneInclusionGraph,
    pub assignment: ProbabilityAssignment,
}

impl OigLearner {
    pub fn new(class: Arc<FiniteHypothesisClass>, degree_cap: usize) -> Result<Self> {
        if degree_cap == 0 {
            return Err(Error::Input("degree cap must be positive".into()));
        }
        Ok(Self {
            class,
            degree_cap,
            memo: RefCell::new(HashMap::new()),
        })
    }

    /// Degree cap defaulting to the class's VC dimension.
    pub fn with_vc_degree(class: Arc<FiniteHypothesisClass>) -> Result<Self> {
        let d = class.vc_dimension()?.max(1);
        Self::new(class, d)
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn class(&self) -> &Arc<FiniteHypothesisClass> {
        &self.class
    }

    /// Graph plus orientation for a canonical (sorted) point tuple.
    pub fn oriented(&self, canonical: &[PointIdx]) -> Result<Rc<OrientedOig>> {
        if let Some(hit) = self.memo.borrow().get(canonical) {
            return Ok(hit.clone());
        }
        let graph = OneInclusionGraph::build(&self.class, canonical)?;
        let assignment = orient_bounded(&graph, self.degree_cap)?;
        let oriented = Rc::new(OrientedOig { graph, assignment });
        self.memo
            .borrow_mut()
            .insert(canonical.to_vec(), oriented.clone());
        Ok(oriented)
    }

    /// Sorts the supersample's points; `perm[i]` is the canonical position
    /// of original coordinate `i`.
    pub fn canonicalize(sample: &Supersample) -> (Vec<PointIdx>, Vec<usize>) {
        let len = sample.len();
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by_key(|&i| (sample.entry(i).point, i));
        let canonical: Vec<PointIdx> = order.iter().map(|&i| sample.entry(i).point).collect();
        let mut perm = vec![0usize; len];
        for (pos, &orig) in order.iter().enumerate() {
            perm[orig] = pos;
        }
        (canonical, perm)
    }

    /// Exact leave-one-out numerator for a supersample: the out-degree of
    /// the true labeling's vertex (so the error is `out/(n+1)`).
    pub fn loo_out_degree(
        &self,
        sample: &Supersample,
        truth: &BTreeMap<PointIdx, Rat>,
    ) -> Result<u64> {
        let (canonical, _) = Self::canonicalize(sample);
        let oriented = self.oriented(&canonical)?;
        let labeling: Vec<Rat> = canonical
            .iter()
            .map(|p| truth.get(p).copied().ok_or_else(|| {
                Error::NonRealizable("supersample point outside the labeled support".into())
            }))
            .collect::<Result<_>>()?;
        let v_star = oriented
            .graph
            .vertex_index(&labeling)
            .ok_or_else(|| Error::NonRealizable("true labeling is not a dichotomy".into()))?;
        Ok(oriented.assignment.out_degree(&oriented.graph, v_star))
    }
}

impl LearnerRule for OigLearner {
    fn name(&self) -> &'static str {
        "oig"
    }

    fn kind(&self) -> LearnerKind {
        LearnerKind::RandomizedTransductive
    }

    fn law(
        &self,
        _domain: &FiniteDomain,
        _loss: &LossFunction,
        sample: &Supersample,
        holdout: usize,
    ) -> Result<OutcomeLaw> {
        let len = sample.len();
        let (canonical, perm) = Self::canonicalize(sample);
        let oriented = self.oriented(&canonical)?;
        let mut canon_labels = vec![rat_int(0); len];
        for i in 0..len {
            if i != holdout {
                canon_labels[perm[i]] = sample.entry(i).label;
            }
        }
        let free = perm[holdout];
        let (first, second) = oriented.graph.consistent_with(&canon_labels, free)?;
        let project = |vertex: usize| -> Predictor {
            let labels: Vec<Rat> = (0..len)
                .map(|j| oriented.graph.vertices()[vertex][perm[j]])
                .collect();
            Predictor::OnPoints(labels)
        };
        let outcomes = match second {
            None => vec![Outcome {
                prob: 1.0,
                predictor: project(first),
                hypothesis: None,
            }],
            Some(other) => {
                let away_first = oriented.assignment.weight(&oriented.graph, first, other);
                let mut v = Vec::new();
                if away_first < 1.0 {
                    v.push(Outcome {
                        prob: 1.0 - away_first,
                        predictor: project(first),
                        hypothesis: None,
                    });
                }
                if away_first > 0.0 {
                    v.push(Outcome {
                        prob: away_first,
                        predictor: project(other),
                        hypothesis: None,
                    });
                }
                v
            }
        };
        Ok(OutcomeLaw { outcomes })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::LabeledExample;
    use crate::num::rat;

    fn pts(ix: &[usize]) -> Vec<PointIdx> {
        ix.iter().map(|&i| PointIdx(i)).collect()
    }

    fn labels(bits: &str) -> Vec<Rat> {
        bits.chars()
            .map(|c| rat_int((c == '1') as i64))
            .collect()
    }

    #[test]
    fn builds_path_for_thresholds() {
        let class = FiniteHypothesisClass::thresholds_above(3);
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 2])).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges().len(), 3);
        // every edge differs at exactly one coordinate by construction
        for e in g.edges() {
            let (a, b) = (&g.vertices()[e.a], &g.vertices()[e.b]);
            let diffs: Vec<usize> = (0..3).filter(|&c| a[c] != b[c]).collect();
            assert_eq!(diffs, vec![e.coord]);
        }
    }

    #[test]
    fn builds_cube_for_full_class() {
        let class = FiniteHypothesisClass::full_binary(3);
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 2])).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edges().len(), 12);
    }

    #[test]
    fn single_hypothesis_graph_is_a_point() {
        let domain = Arc::new(FiniteDomain::grid(3));
        let class = FiniteHypothesisClass::new(
            domain,
            vec![vec![rat_int(0), rat_int(1), rat_int(0)]],
            vec!["h".into()],
        )
        .unwrap();
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 2])).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn duplicate_points_drop_their_edges() {
        let class = FiniteHypothesisClass::thresholds_above(3);
        // point 1 appears twice: flips at that point are no longer Hamming-1
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 1])).unwrap();
        assert_eq!(g.vertex_count(), 3); // 111, 011, 000 patterns on (1,2,2)
        assert_eq!(g.edges().len(), 1); // only the flip at the unique point 0
    }

    #[test]
    fn orients_path_with_degree_one() {
        let class = FiniteHypothesisClass::thresholds_above(4);
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 2, 3])).unwrap();
        let p = orient_bounded(&g, 1).unwrap();
        assert_eq!(p.max_out_degree(&g), 1);
        // complementarity on every edge
        for e in g.edges() {
            let ab = p.weight(&g, e.a, e.b);
            let ba = p.weight(&g, e.b, e.a);
            assert_eq!(ab + ba, 1.0);
        }
    }

    #[test]
    fn orients_cube_with_degree_three() {
        let class = FiniteHypothesisClass::full_binary(3);
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 2])).unwrap();
        let p = orient_bounded(&g, 3).unwrap();
        assert!(p.max_out_degree(&g) <= 3);
        let total: u64 = (0..8).map(|v| p.out_degree(&g, v)).sum();
        assert_eq!(total, 12);
    }

    #[test]
    fn cube_needs_degree_two() {
        let class = FiniteHypothesisClass::full_binary(3);
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 2])).unwrap();
        // density is 12/8 = 1.5, so degree cap 1 must fail ...
        assert!(matches!(orient_bounded(&g, 1), Err(Error::Infeasible(_))));
        // ... and cap 2 (the ceiling) must succeed
        assert!(orient_bounded(&g, 2).is_ok());
    }

    #[test]
    fn consistent_vertices_below_thresholds() {
        let class = FiniteHypothesisClass::thresholds_below(3);
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 2])).unwrap();
        // known labels (1, ?, 0): completions 100 and 110, differing at the
        // free middle coordinate (the placeholder value at coord 1 is ignored)
        let (a, b) = g.consistent_with(&labels("100"), 1).unwrap();
        let b = b.expect("two completions");
        let got = [&g.vertices()[a], &g.vertices()[b]];
        assert!(got.contains(&&labels("100")));
        assert!(got.contains(&&labels("110")));
    }

    #[test]
    fn consistent_vertices_rejects_unrealizable() {
        let class = FiniteHypothesisClass::thresholds_above(3);
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 2])).unwrap();
        // (1, ?, 0) cannot be completed by increasing thresholds
        assert!(matches!(
            g.consistent_with(&labels("100"), 1),
            Err(Error::NonRealizable(_))
        ));
    }

    #[test]
    fn forced_prediction_is_point_mass() {
        let class = FiniteHypothesisClass::thresholds_above(3);
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 2])).unwrap();
        let p = orient_bounded(&g, 1).unwrap();
        // labels (0, 1, ?): above-thresholds force the last label to 1
        let dist = oig_predict(&g, &p, &labels("010"), 2).unwrap();
        assert_eq!(dist, vec![(rat_int(1), 1.0)]);
    }

    #[test]
    fn two_completion_prediction_is_valid_distribution() {
        let class = FiniteHypothesisClass::full_binary(3);
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 2])).unwrap();
        let p = orient_bounded(&g, 3).unwrap();
        let dist = oig_predict(&g, &p, &labels("010"), 2).unwrap();
        let total: f64 = dist.iter().map(|(_, q)| q).sum();
        assert_eq!(total, 1.0);
    }

    #[test]
    fn loo_error_is_out_weight_over_tuple_len() {
        let class = FiniteHypothesisClass::thresholds_above(3);
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 2])).unwrap();
        let p = orient_bounded(&g, 1).unwrap();
        for v in 0..g.vertex_count() {
            let r = oig_loo_error(&g, &p, v).unwrap();
            let expected = p.out_degree(&g, v) as f64 / 3.0;
            assert_eq!(r, expected);
            assert!(r <= 1.0 / 3.0 + 1e-15);
        }
        assert!(oig_loo_error(&g, &p, 99).is_err());
    }

    #[test]
    fn density_examples() {
        // single edge: 1/2
        let domain = Arc::new(FiniteDomain::grid(1));
        let class = FiniteHypothesisClass::new(
            domain,
            vec![vec![rat_int(0)], vec![rat_int(1)]],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        let g = OneInclusionGraph::build(&class, &pts(&[0])).unwrap();
        assert_eq!(max_subgraph_density(&g, 20).unwrap(), rat(1, 2));

        // path of k edges: k/(k+1)
        for m in 2..=5usize {
            let class = FiniteHypothesisClass::thresholds_above(m);
            let points: Vec<PointIdx> = (0..m).map(PointIdx).collect();
            let g = OneInclusionGraph::build(&class, &points).unwrap();
            assert_eq!(
                max_subgraph_density(&g, 20).unwrap(),
                rat(m as i64, m as i64 + 1)
            );
        }

        // 3-cube: 12/8
        let class = FiniteHypothesisClass::full_binary(3);
        let g = OneInclusionGraph::build(&class, &pts(&[0, 1, 2])).unwrap();
        assert_eq!(max_subgraph_density(&g, 20).unwrap(), rat(3, 2));
    }

    #[test]
    fn parametric_density_matches_subset_enumeration() {
        for build in [
            FiniteHypothesisClass::thresholds_above(5),
            FiniteHypothesisClass::full_binary(3),
            FiniteHypothesisClass::full_binary(4),
        ] {
            let k = build.domain().len();
            let points: Vec<PointIdx> = (0..k).map(PointIdx).collect();
            let g = OneInclusionGraph::build(&build, &points).unwrap();
            let exact = max_subgraph_density(&g, 20).unwrap();
            // cap of 1 forces the flow-based search
            let parametric = max_subgraph_density(&g, 1).unwrap();
            assert_eq!(exact, parametric);
        }
    }

    #[test]
    fn density_never_exceeds_vc_dimension() {
        for m in 3..=6usize {
            let class = FiniteHypothesisClass::thresholds_above(m);
            let d = class.vc_dimension().unwrap();
            let points: Vec<PointIdx> = (0..m).map(PointIdx).collect();
            let g = OneInclusionGraph::build(&class, &points).unwrap();
            let density = max_subgraph_density(&g, 20).unwrap();
            assert!(density <= Rat::from_integer(d as i64));
        }
    }

    #[test]
    fn learner_predictions_are_permutation_equivariant() {
        let class = Arc::new(FiniteHypothesisClass::thresholds_above(4));
        let learner = OigLearner::with_vc_degree(class).unwrap();
        let domain = FiniteDomain::grid(4);
        let e = |p: usize, y: i64| LabeledExample::new(PointIdx(p), rat_int(y));
        // truth labeled by the cut at 2: points 1,2 -> 0; 3,4 -> 1
        let ss1 = Supersample::new(vec![e(0, 0), e(1, 0), e(2, 1), e(3, 1)]).unwrap();
        let ss2 = Supersample::new(vec![e(3, 1), e(1, 0), e(2, 1), e(0, 0)]).unwrap();
        // holdout coordinate 2 of ss1 is the same example as coordinate 2 of ss2
        let law1 = learner
            .law(&domain, &LossFunction::ZeroOne, &ss1, 2)
            .unwrap();
        let law2 = learner
            .law(&domain, &LossFunction::ZeroOne, &ss2, 2)
            .unwrap();
        let pred1: Vec<(f64, Rat)> = law1
            .outcomes
            .iter()
            .map(|o| (o.prob, o.predictor.predict_at(&domain, &ss1, 2)))
            .collect();
        let pred2: Vec<(f64, Rat)> = law2
            .outcomes
            .iter()
            .map(|o| (o.prob, o.predictor.predict_at(&domain, &ss2, 2)))
            .collect();
        assert_eq!(pred1, pred2);
    }

    #[test]
    fn learner_interpolates_on_training_coordinates() {
        let class = Arc::new(FiniteHypothesisClass::thresholds_above(4));
        let learner = OigLearner::with_vc_degree(class).unwrap();
        let domain = FiniteDomain::grid(4);
        let e = |p: usize, y: i64| LabeledExample::new(PointIdx(p), rat_int(y));
        let ss = Supersample::new(vec![e(0, 0), e(2, 1), e(3, 1)]).unwrap();
        for u in 0..3 {
            let law = learner.law(&domain, &LossFunction::ZeroOne, &ss, u).unwrap();
            for o in &law.outcomes {
                for i in 0..3 {
                    if i != u {
                        assert_eq!(
                            o.predictor.predict_at(&domain, &ss, i),
                            ss.entry(i).label
                        );
                    }
                }
            }
        }
    }
}
