use super::Instance;
use crate::msgset::MsgSet;

/// Undirected graph on messages: `i -- j` iff some sender holds both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageGraph {
    adj: Vec<MsgSet>,
}

pub fn build_message_graph(inst: &Instance) -> MessageGraph {
    let mut adj = vec![MsgSet::EMPTY; inst.n()];
    for &s in inst.senders() {
        for i in s.iter() {
            adj[i] = adj[i].union(s.without(i));
        }
    }
    MessageGraph { adj }
}

impl MessageGraph {
    pub fn from_adjacency(adj: Vec<MsgSet>) -> Self {
        MessageGraph { adj }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, i: usize) -> MsgSet {
        self.adj[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.adj.len())
            .flat_map(|i| self.adj[i].iter().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    /// Nodes reachable from `start` using only nodes in `within`.
    pub fn component_within(&self, start: usize, within: MsgSet) -> MsgSet {
        let mut seen = MsgSet::singleton(start);
        let mut frontier = seen;
        while let Some(v) = frontier.first() {
            frontier.remove(v);
            let fresh = self.adj[v].intersection(within).difference(seen);
            seen = seen.union(fresh);
            frontier = frontier.union(fresh);
        }
        seen
    }

    /// Whether the subgraph induced by `nodes` is connected. The empty set
    /// and singletons count as connected.
    pub fn is_connected_within(&self, nodes: MsgSet) -> bool {
        match nodes.first() {
            None => true,
            Some(s) => self.component_within(s, nodes) == nodes,
        }
    }
}
