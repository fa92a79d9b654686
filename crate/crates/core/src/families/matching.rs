use petgraph::algo::maximum_matching as blossom;
use petgraph::graph::{NodeIndex, UnGraph};

/// Maximum matching of a bipartite graph given as an edge list over
/// `0..n_left` x `0..n_right`. Returns the indices of the matched edges,
/// sorted; parallel edges resolve to the first.
pub(crate) fn maximum_matching(n_left: usize, n_right: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut g: UnGraph<(), usize> = UnGraph::with_capacity(n_left + n_right, edges.len());
    for _ in 0..n_left + n_right {
        g.add_node(());
    }
    for (e, &(u, v)) in edges.iter().enumerate() {
        let (a, b) = (NodeIndex::new(u), NodeIndex::new(n_left + v));
        if g.find_edge(a, b).is_none() {
            g.add_edge(a, b, e);
        }
    }
    let matching = blossom(&g);
    let mut out: Vec<usize> = matching
        .edges()
        .map(|(a, b)| *g.edge_weight(g.find_edge(a, b).expect("matched edge exists")).expect("weighted"))
        .collect();
    out.sort_unstable();
    out
}
