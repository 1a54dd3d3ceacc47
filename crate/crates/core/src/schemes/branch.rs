use std::cmp::Reverse;
use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use super::CoverScheme;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec, Eliminator};

/// Graph node: `0..t` are the independent rows, `t..` the intermediates in
/// creation order.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intermediate {
    pub value: BitVec,
    pub parents: (NodeId, NodeId),
}

/// Bipartite dependency graph between a basis of `G` (the `u` nodes) and the
/// remaining rows (the `v` nodes), extended with branch intermediates.
#[derive(Debug, Clone)]
pub struct CoverGraph {
    /// Row index in `G` of each `u` node.
    pub u_nodes: Vec<usize>,
    /// Row index in `G` of each `v` node.
    pub v_nodes: Vec<usize>,
    /// Current inbound set of each `v` node, ascending by node id.
    pub inbound: Vec<Vec<NodeId>>,
    pub intermediates: Vec<Intermediate>,
    u_values: Vec<BitVec>,
    v_values: Vec<BitVec>,
}

impl CoverGraph {
    fn new(g: &BitMatrix) -> Result<Self> {
        let mut elim = Eliminator::new(g.dim(), g.len());
        let mut u_nodes = Vec::new();
        let mut v_nodes = Vec::new();
        for (i, row) in g.rows().iter().enumerate() {
            match elim.insert(row) {
                None => u_nodes.push(i),
                Some(_) => v_nodes.push(i),
            }
        }
        if u_nodes.len() < g.dim() {
            return Err(Error::RankDeficient {
                rank: u_nodes.len(),
                expected: g.dim(),
            });
        }
        let mut basis = Eliminator::new(g.dim(), u_nodes.len());
        for &u in &u_nodes {
            basis.insert(g.row(u));
        }
        let inbound = v_nodes
            .iter()
            .map(|&v| {
                basis
                    .express(g.row(v))
                    .expect("full rank basis spans every row")
            })
            .collect();
        Ok(Self {
            u_values: u_nodes.iter().map(|&i| g.row(i).clone()).collect(),
            v_values: v_nodes.iter().map(|&i| g.row(i).clone()).collect(),
            u_nodes,
            v_nodes,
            inbound,
            intermediates: Vec::new(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.u_nodes.len() + self.intermediates.len()
    }

    pub fn node_value(&self, id: NodeId) -> &BitVec {
        match id.checked_sub(self.u_nodes.len()) {
            None => &self.u_values[id],
            Some(j) => &self.intermediates[j].value,
        }
    }

    /// Number of `v` nodes whose inbound set holds each node.
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count()];
        for set in &self.inbound {
            for &n in set {
                deg[n] += 1;
            }
        }
        deg
    }

    /// Whether every `v` node equals the sum of its inbound set and every
    /// intermediate equals the sum of its parents.
    pub fn is_consistent(&self) -> bool {
        let dim = self.u_values.first().map_or(0, BitVec::len);
        let v_ok = self.inbound.iter().zip(&self.v_values).all(|(set, v)| {
            let mut acc = BitVec::zeros(dim);
            for &n in set {
                acc.xor_assign(self.node_value(n));
            }
            &acc == v
        });
        let i_ok = self.intermediates.iter().all(|m| {
            self.node_value(m.parents.0)
                .xor(self.node_value(m.parents.1))
                == m.value
        });
        v_ok && i_ok
    }

    fn add_intermediate(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let value = self.node_value(a).xor(self.node_value(b));
        self.intermediates.push(Intermediate {
            value,
            parents: (a, b),
        });
        self.node_count() - 1
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BranchOptions {
    /// Also put the `v` node vectors into the candidate set.
    pub include_dependents: bool,
}

#[derive(Debug, Clone)]
pub struct Branching {
    pub graph: CoverGraph,
    /// Candidate rows: `u` vectors, then intermediates in creation order
    /// (then `v` vectors if requested), duplicates dropped.
    pub candidates: BitMatrix,
    pub iterations: usize,
    pub k: usize,
}

impl Branching {
    /// The cover read directly off the final graph: `u` nodes plus every node
    /// that appears in some final inbound set.
    pub fn graph_cover(&self) -> CoverScheme {
        let graph = &self.graph;
        let dim = self.candidates.dim();
        let mut used: Vec<NodeId> = (0..graph.u_nodes.len()).collect();
        used.extend(graph.inbound.iter().flatten().copied());
        used.sort_unstable();
        used.dedup();
        let mut rows = Vec::new();
        let mut position: FxHashMap<BitVec, usize> = FxHashMap::default();
        let mut node_row = FxHashMap::default();
        for n in used {
            let v = graph.node_value(n).clone();
            let idx = *position.entry(v.clone()).or_insert_with(|| {
                rows.push(v);
                rows.len() - 1
            });
            node_row.insert(n, idx);
        }
        let mut witnesses = BTreeMap::new();
        for (u, &row) in graph.u_nodes.iter().enumerate() {
            witnesses.insert(row, vec![node_row[&u]]);
        }
        for (set, &row) in graph.inbound.iter().zip(&graph.v_nodes) {
            let mut w: Vec<usize> = set.iter().map(|n| node_row[n]).collect();
            w.sort_unstable();
            witnesses.insert(row, w);
        }
        let a_k = BitMatrix::from_rows(dim, rows).expect("node vectors share the dimension");
        CoverScheme::new(self.k, a_k, witnesses)
    }
}

/// Builds the candidate set for branch-and-search.
///
/// Starting from the bipartite graph over a greedily chosen basis, the
/// dependent node of highest degree above `k` (lowest index on ties) has its
/// inbound set sorted by decreasing degree (lowest node id on ties) and a
/// branch of prefix-sum intermediates built on it. Every dependent node of
/// degree at least `k` whose intersection with that set is exactly a prefix
/// of length `l >= 2` has the prefix replaced by the `l`-th prefix-sum node.
/// This repeats until every dependent node has degree at most `k`.
pub fn branch(g: &BitMatrix, k: usize, options: BranchOptions) -> Result<Branching> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "branch needs k >= 2, got {k}"
        )));
    }
    g.check_nonzero_distinct()?;
    let mut graph = CoverGraph::new(g)?;
    let mut iterations = 0;
    loop {
        let pick = graph
            .inbound
            .iter()
            .enumerate()
            .filter(|(_, set)| set.len() > k)
            .max_by_key(|&(i, set)| (set.len(), Reverse(i)))
            .map(|(i, _)| i);
        let Some(pick) = pick else { break };
        iterations += 1;

        let deg = graph.out_degrees();
        let mut order = graph.inbound[pick].clone();
        order.sort_by_key(|&n| (Reverse(deg[n]), n));

        // prefix[l - 1] is the node holding the sum of the first l members.
        let mut prefix = vec![order[0]];
        for &next in &order[1..] {
            let last = *prefix.last().expect("prefix is nonempty");
            let node = graph.add_intermediate(last, next);
            prefix.push(node);
        }

        let rank_in_order: FxHashMap<NodeId, usize> =
            order.iter().enumerate().map(|(p, &n)| (n, p)).collect();
        for set in graph.inbound.iter_mut() {
            if set.len() < k {
                continue;
            }
            let common: Vec<usize> = set
                .iter()
                .filter_map(|n| rank_in_order.get(n).copied())
                .collect();
            let l = common.len();
            if l < 2 || common.iter().any(|&p| p >= l) {
                continue;
            }
            set.retain(|n| !rank_in_order.contains_key(n));
            set.push(prefix[l - 1]);
            set.sort_unstable();
        }
    }

    let mut seen = rustc_hash::FxHashSet::default();
    let mut rows = Vec::new();
    let mut add = |v: &BitVec| {
        if seen.insert(v.clone()) {
            rows.push(v.clone());
        }
    };
    graph.u_values.iter().for_each(&mut add);
    graph.intermediates.iter().for_each(|m| add(&m.value));
    if options.include_dependents {
        graph.v_values.iter().for_each(&mut add);
    }
    let candidates = BitMatrix::from_rows(g.dim(), rows)?;
    Ok(Branching {
        graph,
        candidates,
        iterations,
        k,
    })
}
