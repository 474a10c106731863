//! Unit-capacity max-flow on vertex-split networks.
//!
//! Every vertex `v` becomes an arc `v_in -> v_out` whose capacity is the
//! vertex capacity; every undirected edge `uv` becomes `u_out -> v_in` and
//! `v_out -> u_in` with unbounded capacity. Augmentation is breadth-first
//! over arcs in insertion order, so results are reproducible.

use std::collections::VecDeque;

use super::{Graph, Vertex, VertexSet};

pub(crate) const INF: i64 = 1 << 40;

#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    to: Vec<usize>,
    cap: Vec<i64>,
    orig: Vec<i64>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        FlowNetwork {
            to: Vec::new(),
            cap: Vec::new(),
            orig: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> usize {
        let id = self.to.len();
        self.to.push(to);
        self.cap.push(cap);
        self.orig.push(cap);
        self.out[from].push(id);
        self.to.push(from);
        self.cap.push(0);
        self.orig.push(0);
        self.out[to].push(id + 1);
        id
    }

    /// Augments along shortest paths until `limit` units flow or no
    /// augmenting path remains. Returns the total flow pushed.
    pub(crate) fn max_flow(&mut self, source: usize, sink: usize, limit: i64) -> i64 {
        let mut total = 0;
        let mut pred = vec![usize::MAX; self.out.len()];
        while total < limit {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            let mut queue = VecDeque::from([source]);
            let mut found = false;
            'bfs: while let Some(x) = queue.pop_front() {
                for &e in &self.out[x] {
                    let y = self.to[e];
                    if self.cap[e] > 0 && y != source && pred[y] == usize::MAX {
                        pred[y] = e;
                        if y == sink {
                            found = true;
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                }
            }
            if !found {
                break;
            }
            let mut bottleneck = limit - total;
            let mut y = sink;
            while y != source {
                let e = pred[y];
                bottleneck = bottleneck.min(self.cap[e]);
                y = self.to[e ^ 1];
            }
            let mut y = sink;
            while y != source {
                let e = pred[y];
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                y = self.to[e ^ 1];
            }
            total += bottleneck;
        }
        total
    }

    /// Nodes reachable from `source` in the residual network.
    pub(crate) fn residual_reach(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            for &e in &self.out[x] {
                let y = self.to[e];
                if self.cap[e] > 0 && !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    fn flow(&self, e: usize) -> i64 {
        self.orig[e] - self.cap[e]
    }
}

/// Vertex-split network over a host graph.
#[derive(Debug, Clone)]
pub(crate) struct SplitNetwork {
    net: FlowNetwork,
    n: usize,
}

impl SplitNetwork {
    pub(crate) fn new<C>(g: &Graph, vertex_cap: C) -> Self
    where
        C: Fn(Vertex) -> i64,
    {
        let n = g.n();
        let mut net = FlowNetwork::new(2 * n + 2);
        for v in g.vertices() {
            net.add_arc(2 * v, 2 * v + 1, vertex_cap(v));
        }
        for (u, v) in g.edges() {
            net.add_arc(2 * u + 1, 2 * v, INF);
            net.add_arc(2 * v + 1, 2 * u, INF);
        }
        SplitNetwork { net, n }
    }

    pub(crate) fn source(&self) -> usize {
        2 * self.n
    }

    pub(crate) fn sink(&self) -> usize {
        2 * self.n + 1
    }

    pub(crate) fn attach_source(&mut self, v: Vertex, cap: i64) {
        let s = self.source();
        self.net.add_arc(s, 2 * v, cap);
    }

    pub(crate) fn attach_sink(&mut self, v: Vertex, cap: i64) {
        let t = self.sink();
        self.net.add_arc(2 * v + 1, t, cap);
    }

    pub(crate) fn run(&mut self, limit: i64) -> i64 {
        let (s, t) = (self.source(), self.sink());
        self.net.max_flow(s, t, limit)
    }

    /// Splits the flow into source-to-sink vertex sequences. Repeated
    /// vertices (flow cycles) are cut out of each sequence.
    pub(crate) fn paths(&self) -> Vec<Vec<Vertex>> {
        let mut remaining: Vec<i64> = (0..self.net.to.len()).map(|e| self.net.flow(e)).collect();
        let (s, t) = (self.source(), self.sink());
        let mut paths = Vec::new();
        loop {
            let start = self.net.out[s]
                .iter()
                .copied()
                .find(|&e| self.net.orig[e] > 0 && remaining[e] > 0);
            let Some(mut e) = start else {
                break;
            };
            let mut seq: Vec<Vertex> = Vec::new();
            loop {
                remaining[e] -= 1;
                let x = self.net.to[e];
                if x == t {
                    break;
                }
                if x.is_multiple_of(2) {
                    let v = x / 2;
                    if let Some(pos) = seq.iter().position(|&w| w == v) {
                        seq.truncate(pos);
                    }
                    seq.push(v);
                }
                e = self.net.out[x]
                    .iter()
                    .copied()
                    .find(|&f| self.net.orig[f] > 0 && remaining[f] > 0)
                    .expect("flow conservation");
            }
            paths.push(seq);
        }
        paths
    }

    /// Minimum cut read off the residual network after a maximum flow:
    /// `(strict source side, cut vertices)`. Cut vertices have their `in`
    /// node reachable and their `out` node unreachable.
    pub(crate) fn cut(&self) -> (VertexSet, VertexSet) {
        let reach = self.net.residual_reach(self.source());
        let mut inner = VertexSet::new();
        let mut cut = VertexSet::new();
        for v in 0..self.n {
            match (reach[2 * v], reach[2 * v + 1]) {
                (true, true) => {
                    inner.insert(v);
                }
                (true, false) => {
                    cut.insert(v);
                }
                _ => {}
            }
        }
        (inner, cut)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_routes_through_a_square() {
        let g = Graph::cycle(4);
        let mut net = SplitNetwork::new(&g, |_| 1);
        net.attach_source(0, INF);
        net.attach_sink(2, INF);
        // endpoints themselves have capacity 1, so only one unit passes
        assert_eq!(net.run(INF), 1);

        let mut net = SplitNetwork::new(&g, |v| if v == 0 || v == 2 { 2 } else { 1 });
        net.attach_source(0, INF);
        net.attach_sink(2, INF);
        assert_eq!(net.run(INF), 2);
        let mut paths = net.paths();
        paths.sort();
        assert_eq!(paths, vec![vec![0, 1, 2], vec![0, 3, 2]]);
    }

    #[test]
    fn cut_of_a_star() {
        let g = Graph::star(5);
        let mut net = SplitNetwork::new(&g, |_| 1);
        net.attach_source(1, INF);
        net.attach_source(2, INF);
        net.attach_sink(3, INF);
        net.attach_sink(4, INF);
        assert_eq!(net.run(INF), 1);
        let (inner, cut) = net.cut();
        assert_eq!(cut, VertexSet::from([0]));
        assert_eq!(inner, VertexSet::from([1, 2]));
    }
}
