use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use super::GraphError;

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Graph6,
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge-list" | "edgelist" => Ok(GraphFormat::EdgeList),
            "graph6" | "g6" => Ok(GraphFormat::Graph6),
            other => Err(format!("unknown graph format {other:?}")),
        }
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, repeated edges and out-of-range ends.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph, GraphError> {
        let mut sets = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if !sets[u].insert(v) {
                return Err(GraphError::ParallelEdge(u.min(v), u.max(v)));
            }
            sets[v].insert(u);
        }
        Ok(Graph { adj: sets.into_iter().map(|s| s.into_iter().collect()).collect() })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// `Some(k)` when every vertex has degree `k`.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|ns| ns.len() == k).then_some(k)
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut a = DMatrix::zeros(n, n);
        for (u, v) in self.edges() {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    pub fn parse(text: &str, format: GraphFormat) -> Result<Graph, GraphError> {
        match format {
            GraphFormat::EdgeList => parse_edge_list(text),
            GraphFormat::Graph6 => parse_graph6(text),
        }
    }

    /// Edge list with an `n <count>` header, so isolated vertices survive.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for (u, v) in self.edges() {
            out += &format!("{u} {v}\n");
        }
        out
    }

    pub fn to_graph6(&self) -> String {
        let n = self.n();
        let mut out: Vec<u8> = Vec::new();
        if n < 63 {
            out.push(n as u8 + 63);
        } else if n < 258_048 {
            out.push(126);
            out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
        } else {
            out.extend([126, 126]);
            out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
        }
        let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for j in 1..n {
            for i in 0..j {
                bits.push(self.has_edge(i, j));
            }
        }
        for chunk in bits.chunks(6) {
            let mut byte = 0u8;
            for (t, &b) in chunk.iter().enumerate() {
                if b {
                    byte |= 1 << (5 - t);
                }
            }
            out.push(byte + 63);
        }
        String::from_utf8(out).expect("graph6 is printable ASCII")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph on {} vertices with {} edges", self.n(), self.edge_count())
    }
}

fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut declared = None;
    let mut edges = Vec::new();
    let mut seen_edge = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| GraphError::Parse { line: idx + 1, message: message.to_string() };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "n" {
            if seen_edge || declared.is_some() || fields.len() != 2 {
                return Err(err("the `n <count>` header must be the first line and appear once"));
            }
            declared = Some(fields[1].parse::<usize>().map_err(|_| err("vertex count is not a number"))?);
            continue;
        }
        if fields.len() != 2 {
            return Err(err("expected two vertex numbers"));
        }
        let u = fields[0].parse::<usize>().map_err(|_| err("vertex is not a non-negative integer"))?;
        let v = fields[1].parse::<usize>().map_err(|_| err("vertex is not a non-negative integer"))?;
        edges.push((u, v));
        seen_edge = true;
    }
    let n = declared.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Graph::from_edges(n, edges)
}

fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let bad = |m: &str| GraphError::Graph6(m.to_string());
    let s = text.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    if s.contains('\n') {
        return Err(bad("expected a single graph"));
    }
    let bytes = s.as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(bad("byte outside the printable range 63..=126"));
    }
    let take = |from: usize, count: usize| -> Result<usize, GraphError> {
        let chunk = bytes.get(from..from + count).ok_or_else(|| bad("truncated vertex count"))?;
        Ok(chunk.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize))
    };
    let (n, mut pos) = match bytes {
        [] => return Err(bad("empty input")),
        [126, 126, ..] => (take(2, 6)?, 8),
        [126, ..] => (take(1, 3)?, 4),
        [b, ..] => ((b - 63) as usize, 1),
    };
    let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if bytes.len() - pos != needed {
        return Err(bad(&format!("expected {needed} data bytes, found {}", bytes.len() - pos)));
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[pos + bit / 6] - 63;
            if byte & (1 << (5 - bit % 6)) != 0 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    pos += needed;
    debug_assert_eq!(pos, bytes.len());
    Graph::from_edges(n, edges)
}

/// Parametrised families understood by [`build_named`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedGraph {
    Cycle(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    /// `Kneser(v, k)`: `k`-subsets of `0..v`, adjacent when disjoint.
    Kneser(usize, usize),
    /// `Hamming(d, q)`: words of length `d` over `0..q`, adjacent at distance one.
    Hamming(usize, usize),
    Petersen,
    Bowtie,
}

impl FromStr for NamedGraph {
    type Err = GraphError;

    /// `"kneser(7,3)"`, `"hamming(3,3)"`, `"petersen"`, ...
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, args) = match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| GraphError::InvalidParameters(format!("missing ')' in {s:?}")))?;
                let args = inner
                    .split(',')
                    .map(|a| a.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| GraphError::InvalidParameters(format!("bad arguments in {s:?}")))?;
                (name.trim(), args)
            }
            None => (s, Vec::new()),
        };
        let arity = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(GraphError::InvalidParameters(format!("{name} takes {k} argument(s)")))
            }
        };
        let g = match name {
            "cycle" => arity(1).map(|_| NamedGraph::Cycle(args[0])),
            "complete" => arity(1).map(|_| NamedGraph::Complete(args[0])),
            "complete-bipartite" => arity(2).map(|_| NamedGraph::CompleteBipartite(args[0], args[1])),
            "kneser" => arity(2).map(|_| NamedGraph::Kneser(args[0], args[1])),
            "hamming" => arity(2).map(|_| NamedGraph::Hamming(args[0], args[1])),
            "petersen" => arity(0).map(|_| NamedGraph::Petersen),
            "bowtie" => arity(0).map(|_| NamedGraph::Bowtie),
            other => Err(GraphError::UnknownFamily(other.to_string())),
        }?;
        Ok(g)
    }
}

/// Vertex orderings: cycles in order around the cycle, Kneser subsets in
/// colexicographic order, Hamming words in lexicographic order (first
/// coordinate most significant). The bowtie has centre `0` and triangles
/// `{0,1,2}` and `{0,3,4}`.
pub fn build_named(g: NamedGraph) -> Result<Graph, GraphError> {
    let invalid = |m: String| Err(GraphError::InvalidParameters(m));
    match g {
        NamedGraph::Cycle(n) => {
            if n < 3 {
                return invalid(format!("cycle needs at least 3 vertices, got {n}"));
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        NamedGraph::Complete(n) => {
            if n == 0 {
                return invalid("complete graph needs at least one vertex".into());
            }
            Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
        }
        NamedGraph::CompleteBipartite(a, b) => {
            if a == 0 || b == 0 {
                return invalid("both sides of a complete bipartite graph must be non-empty".into());
            }
            Graph::from_edges(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))))
        }
        NamedGraph::Kneser(v, k) => {
            if k == 0 || v < 2 * k || v > 63 {
                return invalid(format!("kneser({v},{k}) needs 1 <= k, 2k <= v <= 63"));
            }
            // Sorting bitmasks numerically is exactly colex order.
            let sets: Vec<u64> = (0u64..1 << v).filter(|m| m.count_ones() as usize == k).collect();
            let mut edges = Vec::new();
            for (i, &a) in sets.iter().enumerate() {
                for (j, &b) in sets.iter().enumerate().skip(i + 1) {
                    if a & b == 0 {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(sets.len(), edges)
        }
        NamedGraph::Hamming(d, q) => {
            if d == 0 || q < 2 {
                return invalid(format!("hamming({d},{q}) needs d >= 1 and q >= 2"));
            }
            let n = q.checked_pow(d as u32).filter(|&n| n <= 1 << 20);
            let Some(n) = n else {
                return invalid(format!("hamming({d},{q}) is too large"));
            };
            let mut edges = Vec::new();
            for x in 0..n {
                let mut place = 1;
                for _ in 0..d {
                    let digit = (x / place) % q;
                    for other in digit + 1..q {
                        edges.push((x, x + (other - digit) * place));
                    }
                    place *= q;
                }
            }
            Graph::from_edges(n, edges)
        }
        NamedGraph::Petersen => build_named(NamedGraph::Kneser(5, 2)),
        NamedGraph::Bowtie => Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]),
    }
}
