use nalgebra::Vector3;

/// A static 3D kd-tree over a fixed point set.
///
/// Queries order candidates by `(squared distance, point index)`, so exact
/// distance ties always resolve to the lower index — the same rule a
/// brute-force scan in index order applies.
#[derive(Debug, Clone)]
pub struct KdTree3 {
    pts: Vec<Vector3<f64>>,
    root: Option<Box<Node>>,
}

#[derive(Debug, Clone)]
struct Node {
    idx: usize,
    axis: usize,
    left: Option<Box<Node>>,
    right: Option<Box<Node>>,
}

fn build(pts: &[Vector3<f64>], mut indices: Vec<usize>, depth: usize) -> Option<Box<Node>> {
    if indices.is_empty() {
        return None;
    }
    let axis = depth % 3;
    // Sort by coordinate with the index as a deterministic tie-breaker.
    indices.sort_by(|&a, &b| {
        pts[a][axis]
            .partial_cmp(&pts[b][axis])
            .expect("kd-tree points must not contain NaN")
            .then(a.cmp(&b))
    });
    let mid = indices.len() / 2;
    let idx = indices[mid];
    let right_indices = indices.split_off(mid + 1);
    indices.pop();
    Some(Box::new(Node {
        idx,
        axis,
        left: build(pts, indices, depth + 1),
        right: build(pts, right_indices, depth + 1),
    }))
}

impl KdTree3 {
    /// Builds the tree; point order is preserved for index-based results.
    pub fn new(pts: Vec<Vector3<f64>>) -> Self {
        let indices: Vec<usize> = (0..pts.len()).collect();
        let root = build(&pts, indices, 0);
        Self { pts, root }
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// The `k` nearest points to `q`, ascending by `(squared distance,
    /// index)`. Returns fewer when the tree holds fewer than `k` points.
    pub fn k_nearest(&self, q: &Vector3<f64>, k: usize) -> Vec<(f64, usize)> {
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        if k > 0 {
            Self::search(&self.pts, self.root.as_deref(), q, k, &mut best);
        }
        best
    }

    /// Nearest point to `q` if its distance is strictly below `theta`.
    pub fn nearest_within(&self, q: &Vector3<f64>, theta: f64) -> Option<(f64, usize)> {
        let best = self.k_nearest(q, 1);
        let &(d2, idx) = best.first()?;
        (d2.sqrt() < theta).then_some((d2, idx))
    }

    fn search(
        pts: &[Vector3<f64>],
        node: Option<&Node>,
        q: &Vector3<f64>,
        k: usize,
        best: &mut Vec<(f64, usize)>,
    ) {
        let Some(node) = node else { return };
        let d2 = (q - pts[node.idx]).norm_squared();
        let cand = (d2, node.idx);
        if best.len() < k || cand < *best.last().expect("nonempty when full") {
            let pos = best.partition_point(|&e| e < cand);
            best.insert(pos, cand);
            best.truncate(k);
        }
        let delta = q[node.axis] - pts[node.idx][node.axis];
        let (near, far) = if delta < 0.0 {
            (node.left.as_deref(), node.right.as_deref())
        } else {
            (node.right.as_deref(), node.left.as_deref())
        };
        Self::search(pts, near, q, k, best);
        // The far half-space can only hold a point at squared distance
        // >= delta^2; ties at the current worst must still be visited so the
        // lower-index rule wins.
        if best.len() < k || delta * delta <= best.last().expect("nonempty").0 {
            Self::search(pts, far, q, k, best);
        }
    }
}
