//! Static k-d tree for k-nearest-neighbour queries in embedding space.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Points are rows of a flat `dim`-strided buffer.
pub(crate) struct KdTree<'a> {
    points: &'a [f64],
    dim: usize,
    nodes: Vec<Node>,
    root: Option<usize>,
}

struct Node {
    point: usize,
    axis: usize,
    left: Option<usize>,
    right: Option<usize>,
}

#[derive(PartialEq)]
struct Candidate {
    dist2: f64,
    index: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2.total_cmp(&other.dist2).then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> KdTree<'a> {
    /// Indexes the first `count` rows of `points`.
    pub(crate) fn new(points: &'a [f64], dim: usize, count: usize) -> Self {
        let mut ids: Vec<usize> = (0..count).collect();
        let mut tree = Self { points, dim, nodes: Vec::with_capacity(count), root: None };
        tree.root = tree.build(&mut ids, 0);
        tree
    }

    fn coord(&self, point: usize, axis: usize) -> f64 {
        self.points[point * self.dim + axis]
    }

    fn row(&self, point: usize) -> &[f64] {
        &self.points[point * self.dim..(point + 1) * self.dim]
    }

    fn build(&mut self, ids: &mut [usize], depth: usize) -> Option<usize> {
        if ids.is_empty() {
            return None;
        }
        let axis = depth % self.dim;
        let mid = ids.len() / 2;
        let points = self.points;
        let dim = self.dim;
        ids.select_nth_unstable_by(mid, |&a, &b| {
            points[a * dim + axis].total_cmp(&points[b * dim + axis]).then(a.cmp(&b))
        });
        let point = ids[mid];
        let (lo, rest) = ids.split_at_mut(mid);
        let left = self.build(lo, depth + 1);
        let right = self.build(&mut rest[1..], depth + 1);
        self.nodes.push(Node { point, axis, left, right });
        Some(self.nodes.len() - 1)
    }

    /// The `k` nearest indexed points to `query` accepted by `keep`, nearest
    /// first, as `(index, squared distance)`.
    pub(crate) fn nearest(
        &self,
        query: &[f64],
        k: usize,
        keep: impl Fn(usize) -> bool,
    ) -> Vec<(usize, f64)> {
        let mut heap = BinaryHeap::with_capacity(k + 1);
        if let Some(root) = self.root {
            self.search(root, query, k, &keep, &mut heap);
        }
        let mut out: Vec<_> = heap.into_iter().map(|c| (c.index, c.dist2)).collect();
        out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        out
    }

    fn search(
        &self,
        node: usize,
        query: &[f64],
        k: usize,
        keep: &impl Fn(usize) -> bool,
        heap: &mut BinaryHeap<Candidate>,
    ) {
        let n = &self.nodes[node];
        if keep(n.point) {
            let dist2: f64 = self.row(n.point).iter().zip(query).map(|(a, b)| (a - b).powi(2)).sum();
            let cand = Candidate { dist2, index: n.point };
            if heap.len() < k {
                heap.push(cand);
            } else if cand < *heap.peek().unwrap() {
                heap.pop();
                heap.push(cand);
            }
        }
        let diff = query[n.axis] - self.coord(n.point, n.axis);
        let (near, far) = if diff < 0.0 { (n.left, n.right) } else { (n.right, n.left) };
        if let Some(c) = near {
            self.search(c, query, k, keep, heap);
        }
        if let Some(c) = far {
            if heap.len() < k || diff * diff <= heap.peek().unwrap().dist2 {
                self.search(c, query, k, keep, heap);
            }
        }
    }
}
