//! Compressed sparse row graphs.

use crate::error::{contract, malformed, Result};
use crate::par;
use crate::scan::{offsets_from_counts, radix_sort_u64};
use crate::work::WorkCounter;

/// Undirected graph in CSR form.
///
/// Every edge `{u, v}` is stored twice, once in each endpoint's block, and
/// blocks are sorted by neighbor id. When an orientation is present,
/// `out[i]` is true iff adjacency entry `i` points away from its owner, and
/// exactly one of the two entries of each edge is outgoing.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Option<Vec<f64>>,
    out: Option<Vec<bool>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { offsets: vec![0; n + 1], neighbors: Vec::new(), weights: None, out: None }
    }

    /// Assemble from raw CSR arrays and check every invariant.
    pub fn from_parts(
        offsets: Vec<usize>,
        neighbors: Vec<u32>,
        weights: Option<Vec<f64>>,
        out: Option<Vec<bool>>,
    ) -> Result<Self> {
        let g = Graph { offsets, neighbors, weights, out };
        g.validate()?;
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        sort_edges_to_csr(edges, n, &WorkCounter::new())
    }

    pub fn from_weighted_edges(n: usize, edges: &[(u32, u32, f64)]) -> Result<Self> {
        sort_weighted_edges_to_csr(edges, n, &WorkCounter::new())
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn adjacency(&self) -> &[u32] {
        &self.neighbors
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn orientation(&self) -> Option<&[bool]> {
        self.out.as_deref()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn entry_range(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    /// Weight of adjacency entry `i`; 1 for unweighted graphs.
    pub fn weight_at(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    /// Whether adjacency entry `i` is an out-edge of its owner. Without an
    /// orientation every entry counts as outgoing.
    pub fn is_out(&self, i: usize) -> bool {
        self.out.as_ref().is_none_or(|o| o[i])
    }

    pub fn out_degree(&self, v: usize) -> usize {
        match &self.out {
            None => self.degree(v),
            Some(o) => o[self.entry_range(v)].iter().filter(|&&b| b).count(),
        }
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn max_out_degree(&self) -> usize {
        par::map_range(self.node_count(), |v| self.out_degree(v))
            .into_iter()
            .max()
            .unwrap_or(0)
    }

    pub fn total_weight(&self) -> f64 {
        par::sum_f64(self.node_count(), |v| {
            self.entry_range(v)
                .filter(|&i| (self.neighbors[i] as usize) > v)
                .map(|i| self.weight_at(i))
                .sum()
        })
    }

    /// Edges `(u, v, w)` with `u < v`, in CSR order.
    pub fn edges(&self) -> Vec<(u32, u32, f64)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.node_count() {
            for i in self.entry_range(u) {
                let v = self.neighbors[i];
                if (v as usize) > u {
                    out.push((u as u32, v, self.weight_at(i)));
                }
            }
        }
        out
    }

    /// Index of the mirrored entry for every adjacency entry.
    pub fn twins(&self) -> Vec<usize> {
        par::map_range(self.neighbors.len(), |i| {
            let u = self.owner_of(i) as u32;
            let v = self.neighbors[i] as usize;
            let pos = self.neighbors(v).binary_search(&u).expect("symmetric adjacency");
            self.offsets[v] + pos
        })
    }

    /// Owner node of adjacency entry `i`.
    pub fn owner_of(&self, i: usize) -> usize {
        self.offsets.partition_point(|&o| o <= i) - 1
    }

    /// Owner of every adjacency entry.
    pub fn owners(&self) -> Vec<u32> {
        let mut own = vec![0u32; self.neighbors.len()];
        for v in 0..self.node_count() {
            own[self.entry_range(v)].fill(v as u32);
        }
        own
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        self.weights = Some(weights);
        self.validate()?;
        Ok(self)
    }

    pub fn without_weights(mut self) -> Self {
        self.weights = None;
        self
    }

    /// Orient every edge `u -> v` for which `toward(u, v)` holds.
    pub fn oriented_by<F>(mut self, toward: F) -> Result<Self>
    where
        F: Fn(u32, u32) -> bool + Sync + Send,
    {
        let owners = self.owners();
        let out = par::map_range(self.neighbors.len(), |i| toward(owners[i], self.neighbors[i]));
        self.out = Some(out);
        self.validate()?;
        Ok(self)
    }

    pub fn without_orientation(mut self) -> Self {
        self.out = None;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.node_count();
        if self.offsets.first() != Some(&0) || self.offsets[n] != self.neighbors.len() {
            return Err(malformed("offsets must start at 0 and end at |neighbors|"));
        }
        if self.offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(malformed("offsets must be nondecreasing"));
        }
        if let Some(w) = &self.weights {
            if w.len() != self.neighbors.len() {
                return Err(malformed("weights misaligned with neighbors"));
            }
            if w.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
                return Err(malformed("weights must be finite and nonnegative"));
            }
        }
        if let Some(o) = &self.out {
            if o.len() != self.neighbors.len() {
                return Err(malformed("orientation misaligned with neighbors"));
            }
        }
        for v in 0..n {
            let nb = self.neighbors(v);
            if nb.iter().any(|&u| u as usize >= n || u as usize == v) {
                return Err(malformed(format!("bad neighbor in block of {v}")));
            }
            if nb.windows(2).any(|w| w[0] >= w[1]) {
                return Err(malformed(format!("block of {v} not strictly sorted")));
            }
        }
        let twins = self.twins_checked()?;
        for (i, &t) in twins.iter().enumerate() {
            if let Some(w) = &self.weights {
                if w[i] != w[t] {
                    return Err(malformed("asymmetric weights"));
                }
            }
            if let Some(o) = &self.out {
                if o[i] == o[t] {
                    return Err(malformed("orientation must direct each edge one way"));
                }
            }
        }
        Ok(())
    }

    fn twins_checked(&self) -> Result<Vec<usize>> {
        let owners = self.owners();
        let found = par::map_range(self.neighbors.len(), |i| {
            let v = self.neighbors[i] as usize;
            self.neighbors(v)
                .binary_search(&owners[i])
                .ok()
                .map(|p| self.offsets[v] + p)
        });
        found
            .into_iter()
            .map(|x| x.ok_or_else(|| malformed("adjacency is not symmetric")))
            .collect()
    }
}

fn check_endpoints(n: usize, u: u32, v: u32) -> Result<()> {
    if u as usize >= n || v as usize >= n {
        return Err(malformed(format!("edge ({u},{v}) out of range for n={n}")));
    }
    if u == v {
        return Err(malformed(format!("self-loop at {u}")));
    }
    Ok(())
}

/// Build a CSR graph from an undirected edge list.
///
/// Both directions of each edge are sorted by `(owner, neighbor)` with a
/// stable LSD radix sort; duplicates collapse to their first occurrence.
pub fn sort_edges_to_csr(edges: &[(u32, u32)], n: usize, work: &WorkCounter) -> Result<Graph> {
    let weighted: Vec<(u32, u32, f64)> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
    let g = sort_weighted_edges_to_csr(&weighted, n, work)?;
    Ok(g.without_weights())
}

pub fn sort_weighted_edges_to_csr(
    edges: &[(u32, u32, f64)],
    n: usize,
    work: &WorkCounter,
) -> Result<Graph> {
    for &(u, v, w) in edges {
        check_endpoints(n, u, v)?;
        if !(w >= 0.0) || !w.is_finite() {
            return Err(malformed(format!("bad weight {w} on ({u},{v})")));
        }
    }
    let nn = n as u64;
    let mut dir: Vec<(u64, u32)> = Vec::with_capacity(2 * edges.len());
    for (idx, &(u, v, _)) in edges.iter().enumerate() {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        dir.push((a as u64 * nn + b as u64, idx as u32));
    }
    radix_sort_u64(&mut dir, work);
    dir.dedup_by_key(|x| x.0);
    let mut both: Vec<(u64, u32)> = Vec::with_capacity(2 * dir.len());
    for &(key, idx) in &dir {
        let (a, b) = (key / nn, key % nn);
        both.push((a * nn + b, idx));
        both.push((b * nn + a, idx));
    }
    radix_sort_u64(&mut both, work);
    let mut counts = vec![0u64; n];
    for &(key, _) in &both {
        counts[(key / nn) as usize] += 1;
    }
    let offsets = offsets_from_counts(&counts, work)?;
    let neighbors: Vec<u32> = both.iter().map(|&(k, _)| (k % nn) as u32).collect();
    let weights: Vec<f64> = both.iter().map(|&(_, idx)| edges[idx as usize].2).collect();
    Ok(Graph { offsets, neighbors, weights: Some(weights), out: None })
}

/// Induced/filtered subgraph with compacted ids.
///
/// `keep_edge` is aligned with adjacency entries and must agree on both
/// copies of an edge. New ids are prefix-sum ranks of kept nodes.
pub fn compact_subgraph(
    g: &Graph,
    keep_node: &[bool],
    keep_edge: &[bool],
    work: &WorkCounter,
) -> Result<(Graph, Vec<Option<u32>>, Vec<u32>)> {
    let n = g.node_count();
    if keep_node.len() != n || keep_edge.len() != g.neighbors.len() {
        return Err(contract("masks misaligned with graph"));
    }
    let owners = g.owners();
    let bad = (0..g.neighbors.len()).find(|&i| {
        keep_edge[i] && (!keep_node[owners[i] as usize] || !keep_node[g.neighbors[i] as usize])
    });
    if let Some(i) = bad {
        return Err(contract(format!(
            "kept edge ({},{}) has a dropped endpoint",
            owners[i], g.neighbors[i]
        )));
    }
    let twins = g.twins();
    if (0..g.neighbors.len()).any(|i| keep_edge[i] != keep_edge[twins[i]]) {
        return Err(contract("edge mask disagrees between the two copies of an edge"));
    }
    work.charge("compact", (n + g.neighbors.len()) as u64);
    let flags: Vec<u64> = keep_node.iter().map(|&k| k as u64).collect();
    let rank = crate::scan::prefix_sum(&flags)?;
    work.charge("prefix_sum", n as u64);
    let old_to_new: Vec<Option<u32>> =
        (0..n).map(|v| keep_node[v].then(|| (rank[v] - 1) as u32)).collect();
    let new_to_old: Vec<u32> = (0..n).filter(|&v| keep_node[v]).map(|v| v as u32).collect();
    let counts: Vec<u64> = par::map_slice(&new_to_old, |&v| {
        g.entry_range(v as usize).filter(|&i| keep_edge[i]).count() as u64
    });
    let offsets = offsets_from_counts(&counts, work)?;
    let mut neighbors = Vec::with_capacity(offsets[new_to_old.len()]);
    let mut weights = g.weights.as_ref().map(|_| Vec::with_capacity(neighbors.capacity()));
    let mut out = g.out.as_ref().map(|_| Vec::with_capacity(neighbors.capacity()));
    for &v in &new_to_old {
        for i in g.entry_range(v as usize) {
            if keep_edge[i] {
                neighbors.push(old_to_new[g.neighbors[i] as usize].unwrap());
                if let Some(w) = weights.as_mut() {
                    w.push(g.weights.as_ref().unwrap()[i]);
                }
                if let Some(o) = out.as_mut() {
                    o.push(g.out.as_ref().unwrap()[i]);
                }
            }
        }
    }
    let h = Graph { offsets, neighbors, weights, out };
    Ok((h, old_to_new, new_to_old))
}

/// Subgraph induced by the kept nodes.
pub fn induced_subgraph(
    g: &Graph,
    keep_node: &[bool],
    work: &WorkCounter,
) -> Result<(Graph, Vec<Option<u32>>, Vec<u32>)> {
    let owners = g.owners();
    let keep_edge: Vec<bool> = par::map_range(g.neighbors.len(), |i| {
        keep_node[owners[i] as usize] && keep_node[g.neighbors[i] as usize]
    });
    compact_subgraph(g, keep_node, &keep_edge, work)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(g.offsets(), &[0, 1, 2]);
        assert_eq!(g.adjacency(), &[1, 0]);
    }

    #[test]
    fn rejects_loops_and_range() {
        assert!(Graph::from_edges(2, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn duplicates_keep_first_weight() {
        let g = Graph::from_weighted_edges(3, &[(0, 1, 2.0), (1, 0, 5.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges(), vec![(0, 1, 2.0), (1, 2, 1.0)]);
    }

    #[test]
    fn path_compaction() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let keep_node = [true, true, false];
        let keep_edge: Vec<bool> = (0..g.adjacency().len())
            .map(|i| g.owner_of(i) != 2 && g.adjacency()[i] != 2)
            .collect();
        let (h, fwd, back) = compact_subgraph(&g, &keep_node, &keep_edge, &WorkCounter::new()).unwrap();
        assert_eq!(h.edges(), vec![(0, 1, 1.0)]);
        assert_eq!(fwd, vec![Some(0), Some(1), None]);
        assert_eq!(back, vec![0, 1]);
    }

    #[test]
    fn inconsistent_masks_rejected() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let keep_edge = vec![true; g.adjacency().len()];
        assert!(compact_subgraph(&g, &[true, true, false], &keep_edge, &WorkCounter::new()).is_err());
    }

    #[test]
    fn orientation_is_one_way() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let o = g.oriented_by(|u, v| u < v).unwrap();
        assert_eq!(o.out_degree(0), 1);
        assert_eq!(o.out_degree(2), 0);
        assert_eq!(o.max_out_degree(), 1);
    }
}
