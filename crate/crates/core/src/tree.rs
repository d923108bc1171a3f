//! Gluing compatible distributions along shared variables and extending a
//! tree-shaped compatibility graph to a single joint distribution.
//!
//! Each node of a [`CompatibilityGraph`] is a block of variables; each edge
//! carries a distribution over the union of its endpoint blocks. When the
//! graph is a tree and adjacent edge distributions agree on shared
//! variables, a joint distribution over all variables exists whose
//! marginals reproduce every edge distribution — it is built by folding
//! [`glue`] over a breadth-first traversal.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probability::{atom_bit, varmask_index, Distribution, Domain, VariableSet};
use crate::tolerance;

/// An edge of a compatibility graph: two node indices and the distribution
/// over the union of their blocks.
#[derive(Clone, Debug)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub dist: Distribution,
}

/// Blocks of variables (nodes) plus jointly measured distributions (edges).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct CompatibilityGraph {
    nodes: Vec<VariableSet>,
    edges: Vec<GraphEdge>,
}

#[derive(Clone, Serialize, Deserialize)]
struct NodeRepr {
    block: Vec<String>,
}

#[derive(Clone, Serialize, Deserialize)]
struct EdgeRepr {
    a: usize,
    b: usize,
    dist: Distribution,
}

/// Serialized form: `{"nodes":[{"block":[names]}],"edges":[{"a","b","dist"}]}`.
/// Node domains are inferred from the first edge distribution (`{0,1}` for
/// an edgeless graph).
#[derive(Clone, Serialize, Deserialize)]
struct GraphRepr {
    nodes: Vec<NodeRepr>,
    edges: Vec<EdgeRepr>,
}

impl From<CompatibilityGraph> for GraphRepr {
    fn from(g: CompatibilityGraph) -> Self {
        GraphRepr {
            nodes: g
                .nodes
                .iter()
                .map(|b| NodeRepr { block: b.names().to_vec() })
                .collect(),
            edges: g
                .edges
                .into_iter()
                .map(|e| EdgeRepr { a: e.a, b: e.b, dist: e.dist })
                .collect(),
        }
    }
}

impl TryFrom<GraphRepr> for CompatibilityGraph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        let domain = r
            .edges
            .first()
            .map(|e| e.dist.vars().domain())
            .unwrap_or(Domain::ZeroOne);
        let nodes = r
            .nodes
            .into_iter()
            .map(|n| VariableSet::new(n.block, domain))
            .collect::<Result<Vec<_>>>()?;
        let edges = r
            .edges
            .into_iter()
            .map(|e| GraphEdge { a: e.a, b: e.b, dist: e.dist })
            .collect();
        CompatibilityGraph::new(nodes, edges)
    }
}

impl CompatibilityGraph {
    /// Validates block disjointness, a uniform domain, edge endpoints, and
    /// that each edge distribution covers exactly the union of its endpoint
    /// blocks.
    pub fn new(nodes: Vec<VariableSet>, edges: Vec<GraphEdge>) -> Result<CompatibilityGraph> {
        if nodes.is_empty() {
            return Err(Error::InvalidGraph("no nodes".into()));
        }
        let domain = nodes[0].domain();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for (i, block) in nodes.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidGraph(format!("node {i} has an empty block")));
            }
            if block.domain() != domain {
                return Err(Error::InvalidGraph(format!(
                    "node {i} uses the {} convention, node 0 uses {}",
                    block.domain().label(),
                    domain.label()
                )));
            }
            for name in block.names() {
                if !seen.insert(name) {
                    return Err(Error::InvalidGraph(format!(
                        "variable `{name}` appears in two blocks"
                    )));
                }
            }
        }
        for (k, edge) in edges.iter().enumerate() {
            if edge.a >= nodes.len() || edge.b >= nodes.len() || edge.a == edge.b {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} connects nodes {} and {}",
                    edge.a, edge.b
                )));
            }
            if edge.dist.vars().domain() != domain {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} distribution uses the {} convention",
                    edge.dist.vars().domain().label()
                )));
            }
            let union: BTreeSet<&str> = nodes[edge.a]
                .names()
                .iter()
                .chain(nodes[edge.b].names())
                .map(String::as_str)
                .collect();
            let carried: BTreeSet<&str> =
                edge.dist.vars().names().iter().map(String::as_str).collect();
            if union != carried {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} distribution covers [{}] instead of its endpoint blocks [{}]",
                    edge.dist.vars().names().join(", "),
                    union.into_iter().collect::<Vec<_>>().join(", ")
                )));
            }
        }
        Ok(CompatibilityGraph { nodes, edges })
    }

    pub fn nodes(&self) -> &[VariableSet] {
        &self.nodes
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    /// All variable names in node order.
    pub fn variables(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .flat_map(|b| b.names().iter().map(String::as_str))
            .collect()
    }
}

/// True when the graph is connected and has exactly `nodes - 1` edges.
pub fn is_tree(graph: &CompatibilityGraph) -> bool {
    let n = graph.nodes().len();
    if graph.edges().len() != n - 1 {
        return false;
    }
    let mut adjacency = vec![Vec::new(); n];
    for edge in graph.edges() {
        adjacency[edge.a].push(edge.b);
        adjacency[edge.b].push(edge.a);
    }
    let mut visited = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    visited[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if !visited[v] {
                visited[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == n
}

/// Glues two distributions along their shared variables.
///
/// The overlap marginals must agree within tolerance. The result is over
/// `p`'s variables followed by `q`'s remaining variables, with
/// `r(x) = p(x_P) * q(x_{Q\P} | x_{P∩Q})`; conditioning on a
/// zero-probability overlap assignment falls back to the uniform
/// distribution, which preserves both marginals.
pub fn glue(p: &Distribution, q: &Distribution) -> Result<Distribution> {
    let domain = p.vars().domain();
    if q.vars().domain() != domain {
        return Err(Error::DomainMismatch(format!(
            "gluing a {} distribution with a {} distribution",
            domain.label(),
            q.vars().domain().label()
        )));
    }
    let overlap: Vec<&str> = p
        .vars()
        .names()
        .iter()
        .filter(|name| q.vars().contains(name))
        .map(String::as_str)
        .collect();
    let rest: Vec<&str> = q
        .vars()
        .names()
        .iter()
        .filter(|name| !p.vars().contains(name))
        .map(String::as_str)
        .collect();

    if !overlap.is_empty() {
        let mp = p.marginalize(&overlap)?;
        let mq = q.marginal_onto(mp.vars())?;
        let diff = mp.max_abs_diff(&mq)?;
        if diff > tolerance() {
            let atom = mp
                .weights()
                .iter()
                .zip(mq.weights())
                .enumerate()
                .max_by(|(_, (a, b)), (_, (c, d))| {
                    (*a - *b).abs().total_cmp(&(*c - *d).abs())
                })
                .map(|(i, _)| i)
                .unwrap_or(0);
            return Err(Error::MarginalMismatch {
                vars: overlap.iter().map(|s| s.to_string()).collect(),
                atom,
                discrepancy: diff,
                edge: None,
            });
        }
    }

    let np = p.vars().len();
    let nr = rest.len();
    let k = overlap.len();
    let overlap_positions: Vec<usize> = overlap
        .iter()
        .map(|name| p.vars().index_of(name).expect("overlap names come from p"))
        .collect();

    // Conditional distribution of the new variables for each overlap atom.
    let mut conditionals = Vec::with_capacity(1 << k);
    for oidx in 0..(1usize << k) {
        let assignment: Vec<(&str, i8)> = overlap
            .iter()
            .enumerate()
            .map(|(j, name)| {
                let bit = (oidx >> (k - 1 - j)) as u8 & 1;
                let value = match domain {
                    Domain::ZeroOne => bit as i8,
                    Domain::PlusMinus => {
                        if bit == 1 {
                            1
                        } else {
                            -1
                        }
                    }
                };
                (*name, value)
            })
            .collect();
        conditionals.push(q.condition(&assignment)?.reorder(&rest)?);
    }

    let names: Vec<String> = p
        .vars()
        .names()
        .iter()
        .cloned()
        .chain(rest.iter().map(|s| s.to_string()))
        .collect();
    let vars = VariableSet::new(names, domain)?;
    let mut weights = vec![0.0; 1usize << (np + nr)];
    for pidx in 0..(1usize << np) {
        let wp = p.weight(pidx);
        let mut oidx = 0usize;
        for (j, &pos) in overlap_positions.iter().enumerate() {
            oidx |= (atom_bit(pidx, pos, np) as usize) << (k - 1 - j);
        }
        let conditional = &conditionals[oidx];
        for ridx in 0..(1usize << nr) {
            weights[(pidx << nr) | ridx] = wp * conditional.weight(ridx);
        }
    }
    Distribution::new(vars, weights)
}

/// The joint distribution extending a tree, plus the order edges were glued.
#[derive(Clone, Debug)]
pub struct GlueResult {
    /// Joint distribution over all graph variables.
    pub joint: Distribution,
    /// Edge indices in the order they were folded in.
    pub glue_order: Vec<usize>,
}

/// Builds the joint distribution of a tree-shaped compatibility graph.
///
/// Traversal is deterministic: the root is the node with the
/// lexicographically least block, and neighbors are visited in block order,
/// so repeated runs produce identical results. Fails with
/// [`Error::NotATree`] on cycles or disconnected graphs and
/// [`Error::MarginalMismatch`] (tagged with the offending edge) when an
/// edge distribution disagrees with the joint built so far.
pub fn extend_tree(graph: &CompatibilityGraph) -> Result<GlueResult> {
    let n = graph.nodes().len();
    if !is_tree(graph) {
        let reason = if graph.edges().len() != n - 1 {
            format!("{} nodes with {} edges", n, graph.edges().len())
        } else {
            "graph is disconnected".to_string()
        };
        return Err(Error::NotATree(reason));
    }
    if graph.edges().is_empty() {
        return Err(Error::InvalidGraph(
            "a single isolated node carries no edge distribution to extend".into(),
        ));
    }

    let block_key = |i: usize| graph.nodes()[i].names().to_vec();
    let root = (0..n).min_by_key(|&i| block_key(i)).expect("nodes is non-empty");

    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (neighbor, edge idx)
    for (idx, edge) in graph.edges().iter().enumerate() {
        adjacency[edge.a].push((edge.b, idx));
        adjacency[edge.b].push((edge.a, idx));
    }
    for list in &mut adjacency {
        list.sort_by_key(|&(v, _)| block_key(v));
    }

    let mut visited = vec![false; n];
    visited[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut glue_order = Vec::with_capacity(n - 1);
    let mut joint: Option<Distribution> = None;
    while let Some(u) = queue.pop_front() {
        for &(v, edge_idx) in &adjacency[u] {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            queue.push_back(v);
            let edge_dist = &graph.edges()[edge_idx].dist;
            joint = Some(match joint {
                None => edge_dist.clone(),
                Some(j) => glue(&j, edge_dist).map_err(|e| match e {
                    Error::MarginalMismatch { vars, atom, discrepancy, .. } => {
                        Error::MarginalMismatch { vars, atom, discrepancy, edge: Some(edge_idx) }
                    }
                    other => other,
                })?,
            });
            glue_order.push(edge_idx);
        }
    }
    let joint = joint.expect("tree with at least one edge");

    // The defining property: every edge distribution is a marginal of the
    // extension. Adjacent-edge consistency was enforced during the fold;
    // this is a final, independent check.
    for (idx, edge) in graph.edges().iter().enumerate() {
        let marginal = joint.marginal_onto(edge.dist.vars())?;
        let diff = marginal.max_abs_diff(&edge.dist)?;
        if diff > tolerance() {
            return Err(Error::Internal(format!(
                "extension misses edge {idx} marginal by {diff}"
            )));
        }
    }
    Ok(GlueResult { joint, glue_order })
}

/// Index of the atom of `vars` where the given names take the given bits.
/// Helper for tests and scenario code.
pub(crate) fn atom_index_for(vars: &VariableSet, assignment: &[(&str, u8)]) -> Result<usize> {
    let mut mask = 0u32;
    for &(name, bit) in assignment {
        let i = vars.index_of(name)?;
        mask |= ((bit & 1) as u32) << i;
    }
    Ok(varmask_index(mask, vars.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probability::MomentConstraints;
    use approx::assert_abs_diff_eq;

    fn vs(names: &[&str]) -> VariableSet {
        VariableSet::new(names.iter().copied(), Domain::ZeroOne).unwrap()
    }

    fn pair_dist(a: &str, b: &str, weights: [f64; 4]) -> Distribution {
        Distribution::new(vs(&[a, b]), weights.to_vec()).unwrap()
    }

    #[test]
    fn path_graph_is_a_tree() {
        let g = CompatibilityGraph::new(
            vec![vs(&["A"]), vs(&["B"]), vs(&["C"])],
            vec![
                GraphEdge { a: 0, b: 1, dist: pair_dist("A", "B", [0.25; 4]) },
                GraphEdge { a: 1, b: 2, dist: pair_dist("B", "C", [0.25; 4]) },
            ],
        )
        .unwrap();
        assert!(is_tree(&g));
    }

    #[test]
    fn cycle_is_not_a_tree() {
        let g = CompatibilityGraph::new(
            vec![vs(&["A"]), vs(&["B"]), vs(&["C"])],
            vec![
                GraphEdge { a: 0, b: 1, dist: pair_dist("A", "B", [0.25; 4]) },
                GraphEdge { a: 1, b: 2, dist: pair_dist("B", "C", [0.25; 4]) },
                GraphEdge { a: 2, b: 0, dist: pair_dist("C", "A", [0.25; 4]) },
            ],
        )
        .unwrap();
        assert!(!is_tree(&g));
        assert!(matches!(extend_tree(&g), Err(Error::NotATree(_))));
    }

    #[test]
    fn single_node_is_a_tree_but_not_extendable() {
        let g = CompatibilityGraph::new(vec![vs(&["A"])], vec![]).unwrap();
        assert!(is_tree(&g));
        assert!(matches!(extend_tree(&g), Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let g = CompatibilityGraph::new(
            vec![vs(&["A"]), vs(&["B"]), vs(&["C"]), vs(&["D"])],
            vec![
                GraphEdge { a: 0, b: 1, dist: pair_dist("A", "B", [0.25; 4]) },
                GraphEdge { a: 0, b: 1, dist: pair_dist("A", "B", [0.25; 4]) },
                GraphEdge { a: 2, b: 3, dist: pair_dist("C", "D", [0.25; 4]) },
            ],
        );
        // three edges on four nodes with a repeat: still constructible,
        // but not a tree (disconnected component check)
        let g = g.unwrap();
        assert!(!is_tree(&g));
    }

    #[test]
    fn glue_of_independent_pairs_is_the_product() {
        let p = pair_dist("A", "B", [0.25; 4]);
        let q = pair_dist("B", "C", [0.25; 4]);
        let r = glue(&p, &q).unwrap();
        assert_eq!(r.vars().names(), ["A", "B", "C"]);
        for i in 0..8 {
            assert_abs_diff_eq!(r.weight(i), 0.125, epsilon = 1e-12);
        }
    }

    #[test]
    fn glue_with_no_overlap_is_the_product_distribution() {
        let p = pair_dist("A", "B", [0.5, 0.0, 0.0, 0.5]);
        let q = Distribution::new(vs(&["C"]), vec![0.3, 0.7]).unwrap();
        let r = glue(&p, &q).unwrap();
        assert_abs_diff_eq!(r.moment(&["C"]).unwrap(), 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(
            r.weight(atom_index_for(r.vars(), &[("A", 1), ("B", 1), ("C", 1)]).unwrap()),
            0.35,
            epsilon = 1e-12
        );
    }

    #[test]
    fn glue_rejects_marginal_disagreement() {
        // <B> = 0.5 on the left, 0.6 on the right
        let p = pair_dist("A", "B", [0.25, 0.25, 0.25, 0.25]);
        let q = pair_dist("B", "C", [0.2, 0.2, 0.3, 0.3]);
        let err = glue(&p, &q).unwrap_err();
        match err {
            Error::MarginalMismatch { vars, discrepancy, edge, .. } => {
                assert_eq!(vars, ["B"]);
                assert!((discrepancy - 0.1).abs() < 1e-12);
                assert!(edge.is_none());
            }
            other => panic!("expected MarginalMismatch, got {other}"),
        }
    }

    #[test]
    fn glue_preserves_both_marginals() {
        let p = pair_dist("A", "B", [0.1, 0.3, 0.2, 0.4]);
        // q must have <B>: p gives P(B=1) = 0.3 + 0.4 = 0.7
        let q = pair_dist("B", "C", [0.1, 0.2, 0.3, 0.4]);
        let r = glue(&p, &q).unwrap();
        assert!(r.marginal_onto(p.vars()).unwrap().max_abs_diff(&p).unwrap() < 1e-12);
        assert!(r.marginal_onto(q.vars()).unwrap().max_abs_diff(&q).unwrap() < 1e-12);
    }

    #[test]
    fn glue_handles_zero_probability_overlap() {
        // P(B=1) = 0 on both sides; conditional at B=1 is undefined and
        // falls back to uniform without breaking either marginal.
        let p = pair_dist("A", "B", [0.6, 0.0, 0.4, 0.0]);
        let q = pair_dist("B", "C", [0.5, 0.5, 0.0, 0.0]);
        let r = glue(&p, &q).unwrap();
        assert!(r.marginal_onto(p.vars()).unwrap().max_abs_diff(&p).unwrap() < 1e-12);
        assert!(r.marginal_onto(q.vars()).unwrap().max_abs_diff(&q).unwrap() < 1e-12);
    }

    #[test]
    fn extend_single_edge_returns_that_distribution() {
        let d = pair_dist("A", "B", [0.1, 0.2, 0.3, 0.4]);
        let g = CompatibilityGraph::new(
            vec![vs(&["A"]), vs(&["B"])],
            vec![GraphEdge { a: 0, b: 1, dist: d.clone() }],
        )
        .unwrap();
        let result = extend_tree(&g).unwrap();
        assert!(result.joint.marginal_onto(d.vars()).unwrap().max_abs_diff(&d).unwrap() < 1e-12);
        assert_eq!(result.glue_order, [0]);
    }

    #[test]
    fn extend_star_reproduces_every_edge() {
        // center block {H}, leaves {A}, {B}, {C}; edges share only H
        let center = |leaf: &str, w: [f64; 4]| {
            Distribution::new(vs(&["H", leaf]), w.to_vec()).unwrap()
        };
        let e1 = center("A", [0.3, 0.2, 0.1, 0.4]);
        let e2 = center("B", [0.25, 0.25, 0.25, 0.25]);
        let e3 = center("C", [0.4, 0.1, 0.3, 0.2]);
        // all three give P(H=1) = 0.5
        let g = CompatibilityGraph::new(
            vec![vs(&["H"]), vs(&["A"]), vs(&["B"]), vs(&["C"])],
            vec![
                GraphEdge { a: 0, b: 1, dist: e1.clone() },
                GraphEdge { a: 0, b: 2, dist: e2.clone() },
                GraphEdge { a: 0, b: 3, dist: e3.clone() },
            ],
        )
        .unwrap();
        let result = extend_tree(&g).unwrap();
        for edge_dist in [&e1, &e2, &e3] {
            let marg = result.joint.marginal_onto(edge_dist.vars()).unwrap();
            assert!(marg.max_abs_diff(edge_dist).unwrap() < 1e-12);
        }
    }

    #[test]
    fn extension_marginals_do_not_depend_on_node_order() {
        // Same tree presented with different node numbering: all edge
        // marginals of the extension must be identical.
        let e_ab = pair_dist("A", "B", [0.1, 0.3, 0.2, 0.4]);
        let e_bc = pair_dist("B", "C", [0.12, 0.18, 0.14, 0.56]);
        let g1 = CompatibilityGraph::new(
            vec![vs(&["A"]), vs(&["B"]), vs(&["C"])],
            vec![
                GraphEdge { a: 0, b: 1, dist: e_ab.clone() },
                GraphEdge { a: 1, b: 2, dist: e_bc.clone() },
            ],
        )
        .unwrap();
        let g2 = CompatibilityGraph::new(
            vec![vs(&["C"]), vs(&["B"]), vs(&["A"])],
            vec![
                GraphEdge { a: 1, b: 0, dist: e_bc.clone() },
                GraphEdge { a: 2, b: 1, dist: e_ab.clone() },
            ],
        )
        .unwrap();
        let j1 = extend_tree(&g1).unwrap().joint;
        let j2 = extend_tree(&g2).unwrap().joint;
        for edge_dist in [&e_ab, &e_bc] {
            let m1 = j1.marginal_onto(edge_dist.vars()).unwrap();
            let m2 = j2.marginal_onto(edge_dist.vars()).unwrap();
            assert!(m1.max_abs_diff(&m2).unwrap() < 1e-12);
            assert!(m1.max_abs_diff(edge_dist).unwrap() < 1e-12);
        }
    }

    #[test]
    fn extend_rewraps_mismatch_with_edge_index() {
        let g = CompatibilityGraph::new(
            vec![vs(&["A"]), vs(&["B"]), vs(&["C"])],
            vec![
                GraphEdge { a: 0, b: 1, dist: pair_dist("A", "B", [0.25; 4]) },
                // <B> = 0.6 here but 0.5 on the first edge
                GraphEdge { a: 1, b: 2, dist: pair_dist("B", "C", [0.2, 0.2, 0.3, 0.3]) },
            ],
        )
        .unwrap();
        match extend_tree(&g).unwrap_err() {
            Error::MarginalMismatch { edge, .. } => assert_eq!(edge, Some(1)),
            other => panic!("expected MarginalMismatch, got {other}"),
        }
    }

    #[test]
    fn blocks_with_several_variables_glue_correctly() {
        // blocks {A1,A2} and {B}; one edge carrying a 3-variable dist
        let vars3 = vs(&["A1", "A2", "B"]);
        let mut m = MomentConstraints::new(vars3.clone());
        m.insert(&["A1"], 0.5).unwrap();
        m.insert(&["A2"], 0.5).unwrap();
        m.insert(&["B"], 0.5).unwrap();
        m.insert(&["A1", "A2"], 0.25).unwrap();
        m.insert(&["A1", "B"], 0.25).unwrap();
        m.insert(&["A2", "B"], 0.25).unwrap();
        m.insert(&["A1", "A2", "B"], 0.125).unwrap();
        let d = crate::probability::moments_to_distribution(&m).unwrap();
        let g = CompatibilityGraph::new(
            vec![vs(&["A1", "A2"]), vs(&["B"])],
            vec![GraphEdge { a: 0, b: 1, dist: d.clone() }],
        )
        .unwrap();
        let joint = extend_tree(&g).unwrap().joint;
        assert!(joint.marginal_onto(d.vars()).unwrap().max_abs_diff(&d).unwrap() < 1e-12);
    }

    #[test]
    fn graph_serde_round_trip() {
        let g = CompatibilityGraph::new(
            vec![vs(&["A"]), vs(&["B"])],
            vec![GraphEdge { a: 0, b: 1, dist: pair_dist("A", "B", [0.1, 0.2, 0.3, 0.4]) }],
        )
        .unwrap();
        let json = serde_json::to_string(&g).unwrap();
        let back: CompatibilityGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back.nodes().len(), 2);
        assert_eq!(back.edges().len(), 1);
        assert!(back.edges()[0]
            .dist
            .max_abs_diff(&g.edges()[0].dist)
            .unwrap()
            .abs()
            < 1e-15);
    }

    #[test]
    fn graph_rejects_overlapping_blocks() {
        let result = CompatibilityGraph::new(
            vec![vs(&["A", "B"]), vs(&["B"])],
            vec![],
        );
        assert!(matches!(result, Err(Error::InvalidGraph(_))));
    }

    #[test]
    fn graph_rejects_edge_with_wrong_variable_cover() {
        let result = CompatibilityGraph::new(
            vec![vs(&["A"]), vs(&["B"])],
            vec![GraphEdge {
                a: 0,
                b: 1,
                dist: pair_dist("A", "C", [0.25; 4]),
            }],
        );
        assert!(matches!(result, Err(Error::InvalidGraph(_))));
    }
}
