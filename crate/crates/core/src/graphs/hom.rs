use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::{induced_subgraph, Graph, GraphError};

/// A total function between vertex sets; serialises as the JSON array `image`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexMap {
    pub image: Vec<usize>,
}

impl VertexMap {
    pub fn identity(n: usize) -> VertexMap {
        VertexMap { image: (0..n).collect() }
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    /// `other ∘ self`
    pub fn then(&self, other: &VertexMap) -> VertexMap {
        VertexMap { image: self.image.iter().map(|&v| other.image[v]).collect() }
    }

    pub(crate) fn check_into(&self, source: usize, target: usize) -> Result<(), GraphError> {
        if self.image.len() != source {
            return Err(GraphError::MapLength { expected: source, found: self.image.len() });
        }
        if let Some(&v) = self.image.iter().find(|&&v| v >= target) {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: target });
        }
        Ok(())
    }
}

/// Whether every edge of `x` maps to an edge of `y`.
pub fn is_homomorphism(x: &Graph, y: &Graph, phi: &VertexMap) -> bool {
    phi.check_into(x.n(), y.n()).is_ok() && x.edges().all(|(u, v)| y.has_edge(phi.apply(u), phi.apply(v)))
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Pairs `(x-vertex, y-vertex)` the map must honour.
    pub fixed: Vec<(usize, usize)>,
    /// Treat `y` as the subgraph of `x` induced on `0..y.n()` and fix those
    /// vertices, so a found map is a retraction.
    pub retraction: bool,
    pub timeout: Option<Duration>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomOutcome {
    Found(VertexMap),
    /// The whole search space was exhausted.
    None,
    /// The time limit was hit first.
    Unknown,
}

/// Nodes visited between clock reads.
const CLOCK_STRIDE: u64 = 1024;

struct Search<'a> {
    x: &'a Graph,
    y_nbrs: Vec<FixedBitSet>,
    order: Vec<usize>,
    deadline: Option<Instant>,
    nodes: u64,
}

enum Step {
    Done(Vec<usize>),
    Exhausted,
    TimedOut,
}

/// Backtracking search for a homomorphism `x → y`. Vertices of `x` are
/// assigned in order of decreasing degree, ties broken by index; candidate
/// images are tried in increasing order; after each assignment the domains
/// are made arc consistent. The first map found is returned, so the result
/// is deterministic.
pub fn search_hom(x: &Graph, y: &Graph, opts: &SearchOptions) -> Result<HomOutcome, GraphError> {
    let mut fixed = opts.fixed.clone();
    if opts.retraction {
        if y.n() > x.n() {
            return Err(GraphError::InvalidParameters("retract has more vertices than the source".into()));
        }
        let prefix: Vec<usize> = (0..y.n()).collect();
        if induced_subgraph(x, &prefix)? != *y {
            return Err(GraphError::InvalidParameters(
                "retraction target must equal the subgraph of the source induced on its first vertices".into(),
            ));
        }
        fixed.extend(prefix.iter().map(|&v| (v, v)));
    }
    let mut domains = vec![full(y.n()); x.n()];
    for &(u, v) in &fixed {
        if u >= x.n() {
            return Err(GraphError::VertexOutOfRange { vertex: u, n: x.n() });
        }
        if v >= y.n() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: y.n() });
        }
        let mut only = FixedBitSet::with_capacity(y.n());
        only.insert(v);
        domains[u].intersect_with(&only);
    }
    let mut order: Vec<usize> = (0..x.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(x.degree(v)), v));
    let y_nbrs = (0..y.n())
        .map(|v| {
            let mut s = FixedBitSet::with_capacity(y.n());
            s.extend(y.neighbors(v).iter().copied());
            s
        })
        .collect();
    let mut s = Search { x, y_nbrs, order, deadline: opts.timeout.map(|t| Instant::now() + t), nodes: 0 };
    if !s.propagate(&mut domains, (0..x.n()).collect()) {
        return Ok(HomOutcome::None);
    }
    Ok(match s.extend(domains, 0) {
        Step::Done(image) => HomOutcome::Found(VertexMap { image }),
        Step::Exhausted => HomOutcome::None,
        Step::TimedOut => HomOutcome::Unknown,
    })
}

/// A retraction of `x` onto the subgraph induced on `retract`, returned as an
/// endomorphism of `x`.
pub fn search_retraction(x: &Graph, retract: &[usize], timeout: Option<Duration>) -> Result<HomOutcome, GraphError> {
    let y = induced_subgraph(x, retract)?;
    let opts =
        SearchOptions { fixed: retract.iter().enumerate().map(|(i, &v)| (v, i)).collect(), retraction: false, timeout };
    Ok(match search_hom(x, &y, &opts)? {
        HomOutcome::Found(phi) => HomOutcome::Found(phi.then(&VertexMap { image: retract.to_vec() })),
        other => other,
    })
}

fn full(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

impl Search<'_> {
    /// Neighbourhood in `y` of a set of `y`-vertices.
    fn image_nbrs(&self, dom: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.y_nbrs.len());
        for v in dom.ones() {
            out.union_with(&self.y_nbrs[v]);
        }
        out
    }

    /// AC-3 on the edge constraints; `false` on a wipe-out.
    fn propagate(&self, domains: &mut [FixedBitSet], mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; domains.len()];
        for &v in &queue {
            queued[v] = true;
        }
        while let Some(b) = queue.pop() {
            queued[b] = false;
            let support = self.image_nbrs(&domains[b]);
            for &a in self.x.neighbors(b) {
                let before = domains[a].count_ones(..);
                domains[a].intersect_with(&support);
                let after = domains[a].count_ones(..);
                if after == 0 {
                    return false;
                }
                if after < before && !queued[a] {
                    queued[a] = true;
                    queue.push(a);
                }
            }
        }
        true
    }

    fn extend(&mut self, domains: Vec<FixedBitSet>, depth: usize) -> Step {
        if depth == self.order.len() {
            return Step::Done(domains.iter().map(|d| d.ones().next().expect("non-empty domain")).collect());
        }
        let v = self.order[depth];
        let candidates: Vec<usize> = domains[v].ones().collect();
        for c in candidates {
            self.nodes += 1;
            if self.nodes % CLOCK_STRIDE == 1 && self.deadline.is_some_and(|d| Instant::now() >= d) {
                return Step::TimedOut;
            }
            let mut next = domains.clone();
            next[v].clear();
            next[v].insert(c);
            if !self.propagate(&mut next, vec![v]) {
                continue;
            }
            match self.extend(next, depth + 1) {
                Step::Exhausted => {}
                done => return done,
            }
        }
        Step::Exhausted
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_named, NamedGraph};

    fn named(s: &str) -> Graph {
        build_named(s.parse::<NamedGraph>().unwrap()).unwrap()
    }

    #[test]
    fn homomorphism_predicate() {
        let c5 = named("cycle(5)");
        assert!(is_homomorphism(&c5, &c5, &VertexMap::identity(5)));
        let k1 = Graph::from_edges(1, []).unwrap();
        assert!(!is_homomorphism(&c5, &k1, &VertexMap { image: vec![0; 5] }));
        assert!(!is_homomorphism(&c5, &c5, &VertexMap { image: vec![0; 4] }));
    }

    #[test]
    fn three_colouring_of_hamming() {
        let h = named("hamming(3,3)");
        let k3 = named("complete(3)");
        let HomOutcome::Found(phi) = search_hom(&h, &k3, &SearchOptions::default()).unwrap() else {
            panic!("H(3,3) is 3-colourable");
        };
        assert!(is_homomorphism(&h, &k3, &phi));
        let k2 = named("complete(2)");
        assert_eq!(search_hom(&h, &k2, &SearchOptions::default()).unwrap(), HomOutcome::None);
    }

    #[test]
    fn retraction_with_everything_fixed_is_identity() {
        let c5 = named("cycle(5)");
        let opts = SearchOptions { retraction: true, ..Default::default() };
        assert_eq!(search_hom(&c5, &c5, &opts).unwrap(), HomOutcome::Found(VertexMap::identity(5)));
    }

    #[test]
    fn fixed_assignments_are_honoured() {
        let c6 = named("cycle(6)");
        let k2 = named("complete(2)");
        let opts = SearchOptions { fixed: vec![(0, 1)], ..Default::default() };
        let HomOutcome::Found(phi) = search_hom(&c6, &k2, &opts).unwrap() else { panic!() };
        assert_eq!(phi.image, vec![1, 0, 1, 0, 1, 0]);
        let clash = SearchOptions { fixed: vec![(0, 1), (1, 1)], ..Default::default() };
        assert_eq!(search_hom(&c6, &k2, &clash).unwrap(), HomOutcome::None);
    }

    #[test]
    fn odd_cycle_into_shorter_odd_cycle() {
        // C7 -> C5 exists, C5 -> C7 does not.
        let (c5, c7) = (named("cycle(5)"), named("cycle(7)"));
        assert!(matches!(search_hom(&c7, &c5, &SearchOptions::default()).unwrap(), HomOutcome::Found(_)));
        assert_eq!(search_hom(&c5, &c7, &SearchOptions::default()).unwrap(), HomOutcome::None);
    }

    #[test]
    fn petersen_has_no_proper_retract() {
        // The Petersen graph is a core, so no proper retract exists.
        let p = named("petersen");
        let out = search_retraction(&p, &[0, 1, 2, 3, 4], None).unwrap();
        assert_eq!(out, HomOutcome::None);
    }

    #[test]
    fn zero_timeout_reports_unknown() {
        let o7 = named("kneser(7,3)");
        let c7 = named("cycle(7)");
        let opts = SearchOptions { timeout: Some(Duration::ZERO), ..Default::default() };
        assert_eq!(search_hom(&o7, &c7, &opts).unwrap(), HomOutcome::Unknown);
    }
}
