//! Shortest-augmenting-path integer max flow. Arcs are scanned in insertion
//! order, so the maximum flow (and the orientations derived from it) is
//! deterministic for a fixed construction order.

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    flow: i64,
}

#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds a directed arc and its zero-capacity reverse; returns the arc id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> usize {
        debug_assert!(cap >= 0);
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, flow: 0 });
        self.adj[from].push(id);
        self.arcs.push(Arc {
            to: from,
            cap: 0,
            flow: 0,
        });
        self.adj[to].push(id + 1);
        id
    }

    pub fn flow_on(&self, arc: usize) -> i64 {
        self.arcs[arc].flow
    }

    fn residual(&self, arc: usize) -> i64 {
        self.arcs[arc].cap - self.arcs[arc].flow
    }

    /// Edmonds-Karp: repeatedly send flow along a shortest augmenting path.
    pub fn max_flow(&mut self, source: usize, sink: usize) -> i64 {
        assert_ne!(source, sink);
        let mut total: i64 = 0;
        loop {
            // BFS for a shortest path in the residual graph
            let mut parent_arc = vec![usize::MAX; self.adj.len()];
            let mut visited = vec![false; self.adj.len()];
            let mut queue = std::collections::VecDeque::new();
            visited[source] = true;
            queue.push_back(source);
            'bfs: while let Some(v) = queue.pop_front() {
                for &a in &self.adj[v] {
                    if self.residual(a) > 0 && !visited[self.arcs[a].to] {
                        let to = self.arcs[a].to;
                        visited[to] = true;
                        parent_arc[to] = a;
                        if to == sink {
                            break 'bfs;
                        }
                        queue.push_back(to);
                    }
                }
            }
            if !visited[sink] {
                return total;
            }
            // find the bottleneck and push
            let mut bottleneck = i64::MAX;
            let mut v = sink;
            while v != source {
                let a = parent_arc[v];
                bottleneck = bottleneck.min(self.residual(a));
                v = self.arcs[a ^ 1].to;
            }
            let mut v = sink;
            while v != source {
                let a = parent_arc[v];
                self.arcs[a].flow += bottleneck;
                self.arcs[a ^ 1].flow -= bottleneck;
                v = self.arcs[a ^ 1].to;
            }
            total += bottleneck;
        }
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_network() {
        // s -> a (3), s -> b (2), a -> t (2), b -> t (3), a -> b (1)
        let mut net = FlowNetwork::new(4);
        let (s, a, b, t) = (0, 1, 2, 3);
        net.add_arc(s, a, 3);
        net.add_arc(s, b, 2);
        net.add_arc(a, t, 2);
        net.add_arc(b, t, 3);
        net.add_arc(a, b, 1);
        assert_eq!(net.max_flow(s, t), 5);
    }

    #[test]
    fn disconnected_sink() {
        let mut net = FlowNetwork::new(3);
        net.add_arc(0, 1, 10);
        assert_eq!(net.max_flow(0, 2), 0);
    }

    #[test]
    fn deterministic_flow_assignment() {
        let build = || {
            let mut net = FlowNetwork::new(4);
            net.add_arc(0, 1, 1);
            net.add_arc(0, 2, 1);
            net.add_arc(1, 3, 1);
            net.add_arc(2, 3, 1);
            net
        };
        let mut x = build();
        let mut y = build();
        x.max_flow(0, 3);
        y.max_flow(0, 3);
        for a in 0..8 {
            assert_eq!(x.flow_on(a), y.flow_on(a));
        }
    }
}
