use std::collections::VecDeque;

use super::{Graph, GraphError, VertexMap};
use crate::params::IntersectionArray;

/// Marker for vertex pairs in different components.
pub const UNREACHABLE: usize = usize::MAX;

/// All-pairs hop distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceData {
    dist: Vec<Vec<usize>>,
    /// `None` when the graph is disconnected or empty.
    pub diameter: Option<usize>,
}

impl DistanceData {
    pub fn new(g: &Graph) -> DistanceData {
        let dist: Vec<Vec<usize>> = (0..g.n()).map(|s| bfs(g, s)).collect();
        let diameter = if g.n() == 0 || dist.iter().flatten().any(|&x| x == UNREACHABLE) {
            None
        } else {
            dist.iter().flatten().copied().max()
        };
        DistanceData { dist, diameter }
    }

    /// Hop distance, or [`UNREACHABLE`].
    pub fn get(&self, u: usize, v: usize) -> usize {
        self.dist[u][v]
    }

    pub fn row(&self, u: usize) -> &[usize] {
        &self.dist[u]
    }

    /// Vertices at distance exactly `i` from `u`.
    pub fn layer(&self, u: usize, i: usize) -> Vec<usize> {
        (0..self.dist.len()).filter(|&v| self.dist[u][v] == i).collect()
    }
}

fn bfs(g: &Graph, s: usize) -> Vec<usize> {
    let mut d = vec![UNREACHABLE; g.n()];
    d[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if d[w] == UNREACHABLE {
                d[w] = d[u] + 1;
                queue.push_back(w);
            }
        }
    }
    d
}

pub fn distances(g: &Graph) -> DistanceData {
    DistanceData::new(g)
}

pub(crate) fn require_connected(g: &Graph) -> Result<DistanceData, GraphError> {
    let dd = DistanceData::new(g);
    if dd.diameter.is_none() {
        return Err(GraphError::Disconnected);
    }
    Ok(dd)
}

/// The intersection array of `g` if it is distance-regular. Graphs with
/// fewer than two vertices have no array and yield `None`.
pub fn recognize_drg(g: &Graph) -> Result<Option<IntersectionArray>, GraphError> {
    let dd = require_connected(g)?;
    recognize_with(g, &dd)
}

pub(crate) fn recognize_with(g: &Graph, dd: &DistanceData) -> Result<Option<IntersectionArray>, GraphError> {
    let d = dd.diameter.ok_or(GraphError::Disconnected)?;
    if d == 0 {
        return Ok(None);
    }
    // (c_i, a_i, b_i) per distance, fixed by the first pair seen.
    let mut counts: Vec<Option<(usize, usize, usize)>> = vec![None; d + 1];
    for u in 0..g.n() {
        for v in 0..g.n() {
            let i = dd.get(u, v);
            let (mut c, mut a, mut b) = (0, 0, 0);
            for &w in g.neighbors(v) {
                let j = dd.get(u, w);
                if j + 1 == i {
                    c += 1;
                } else if j == i {
                    a += 1;
                } else {
                    b += 1;
                }
            }
            match counts[i] {
                None => counts[i] = Some((c, a, b)),
                Some(t) if t == (c, a, b) => {}
                Some(_) => return Ok(None),
            }
        }
    }
    let counts: Vec<(usize, usize, usize)> = counts.into_iter().map(|t| t.expect("every distance occurs")).collect();
    let b = counts[..d].iter().map(|t| t.2 as u64).collect();
    let c = counts[1..].iter().map(|t| t.0 as u64).collect();
    Ok(Some(IntersectionArray::from_lists(b, c).expect("lists have equal length")))
}

/// Subgraph induced on `vertices`, relabelled `0..len` in the given order.
pub fn induced_subgraph(g: &Graph, vertices: &[usize]) -> Result<Graph, GraphError> {
    let mut index = vec![None; g.n()];
    for (i, &v) in vertices.iter().enumerate() {
        if v >= g.n() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n() });
        }
        if index[v].replace(i).is_some() {
            return Err(GraphError::InvalidParameters(format!("vertex {v} listed twice")));
        }
    }
    let mut edges = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        for &w in g.neighbors(v) {
            if let Some(j) = index[w] {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    Graph::from_edges(vertices.len(), edges)
}

/// Connected components of the subgraph induced on the far layer `Γ_d(u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarComponents {
    /// Diameter of the whole graph.
    pub d: usize,
    /// Each component as a sorted list of original vertex labels, ordered
    /// by smallest element.
    pub components: Vec<Vec<usize>>,
}

impl FarComponents {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }
}

pub fn far_components(g: &Graph, u: usize) -> Result<FarComponents, GraphError> {
    if u >= g.n() {
        return Err(GraphError::VertexOutOfRange { vertex: u, n: g.n() });
    }
    let dd = require_connected(g)?;
    let d = dd.diameter.expect("connected");
    let layer = dd.layer(u, d);
    let sub = induced_subgraph(g, &layer)?;
    let sd = DistanceData::new(&sub);
    let mut seen = vec![false; sub.n()];
    let mut components = Vec::new();
    for s in 0..sub.n() {
        if seen[s] {
            continue;
        }
        let comp: Vec<usize> = (0..sub.n()).filter(|&t| sd.get(s, t) != UNREACHABLE).collect();
        for &t in &comp {
            seen[t] = true;
        }
        components.push(comp.into_iter().map(|t| layer[t]).collect());
    }
    Ok(FarComponents { d, components })
}

/// Diameter of the subgraph induced on the image of `phi`; `None` if that
/// subgraph is disconnected (impossible for a homomorphism of a connected graph).
pub fn image_diameter(g: &Graph, phi: &VertexMap) -> Result<Option<usize>, GraphError> {
    phi.check_into(g.n(), g.n())?;
    let mut image: Vec<usize> = phi.image.clone();
    image.sort_unstable();
    image.dedup();
    let sub = induced_subgraph(g, &image)?;
    Ok(DistanceData::new(&sub).diameter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_named, NamedGraph};

    fn named(s: &str) -> Graph {
        build_named(s.parse::<NamedGraph>().unwrap()).unwrap()
    }

    fn array(g: &Graph) -> Option<String> {
        recognize_drg(g).unwrap().map(|a| a.to_string())
    }

    #[test]
    fn recognition() {
        assert_eq!(array(&named("cycle(5)")).unwrap(), "{2,1;1,1}");
        assert_eq!(array(&named("kneser(7,3)")).unwrap(), "{4,3,3;1,1,2}");
        assert_eq!(array(&named("hamming(3,3)")).unwrap(), "{6,4,2;1,2,3}");
        assert_eq!(array(&named("petersen")).unwrap(), "{3,2;1,1}");
        assert_eq!(array(&named("complete(4)")).unwrap(), "{3;1}");
        assert_eq!(array(&named("complete-bipartite(3,3)")).unwrap(), "{3,2;1,3}");
        assert_eq!(array(&named("bowtie")), None);
        let two = Graph::from_edges(2, []).unwrap();
        assert!(matches!(recognize_drg(&two), Err(GraphError::Disconnected)));
    }

    #[test]
    fn distances_are_a_metric() {
        let g = named("hamming(3,3)");
        let dd = distances(&g);
        assert_eq!(dd.diameter, Some(3));
        for u in 0..g.n() {
            assert_eq!(dd.get(u, u), 0);
            for v in 0..g.n() {
                assert_eq!(dd.get(u, v), dd.get(v, u));
                for w in 0..g.n() {
                    assert!(dd.get(u, w) <= dd.get(u, v) + dd.get(v, w));
                }
            }
        }
        assert_eq!(distances(&named("bowtie")).diameter, Some(2));
    }

    #[test]
    fn odd_graph_far_layer_is_three_hexagons() {
        let g = named("kneser(7,3)");
        for u in 0..g.n() {
            let fc = far_components(&g, u).unwrap();
            assert_eq!(fc.d, 3);
            assert_eq!(fc.sizes(), vec![6, 6, 6]);
            for comp in &fc.components {
                let c = induced_subgraph(&g, comp).unwrap();
                assert_eq!(c.regular_degree(), Some(2));
                assert_eq!(distances(&c).diameter, Some(3));
            }
        }
    }

    #[test]
    fn other_far_layers() {
        let p = far_components(&named("petersen"), 0).unwrap();
        assert_eq!(p.sizes(), vec![6]);
        // K_{3,3}: the far layer is the other two vertices of u's side, with no edges.
        let k = far_components(&named("complete-bipartite(3,3)"), 0).unwrap();
        assert_eq!(k.components, vec![vec![1], vec![2]]);
    }

    #[test]
    fn image_diameters() {
        let h = named("hamming(3,3)");
        let id = VertexMap::identity(h.n());
        assert_eq!(image_diameter(&h, &id).unwrap(), Some(3));
        // every vertex to one end of the edge {0, 1} by parity of its digit sum
        let edge = VertexMap { image: (0..27).map(|x: usize| (x % 3 + x / 3 % 3 + x / 9) % 2).collect() };
        assert_eq!(image_diameter(&h, &edge).unwrap(), Some(1));
    }
}
