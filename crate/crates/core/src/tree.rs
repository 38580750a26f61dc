//! Rooted trees with per-edge weights: the shared carrier for invasion
//! clusters, aggregation balls, minimum spanning trees, and their balls.

use crate::{domain_err, Error, Result};

/// Adjacency-list rooted tree; vertex 0..n-1, each non-root vertex stores its
/// parent and the weight of its parent edge.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedWeightedTree {
    parent: Vec<u32>, // parent[root] == root
    parent_weight: Vec<f64>,
    children: Vec<Vec<u32>>,
    root: u32,
}

impl RootedWeightedTree {
    pub fn new_root() -> Self {
        Self {
            parent: vec![0],
            parent_weight: vec![0.0],
            children: vec![Vec::new()],
            root: 0,
        }
    }

    /// Append a child of `parent` with the given parent-edge weight; returns
    /// the new vertex id.
    pub fn add_child(&mut self, parent: u32, weight: f64) -> u32 {
        debug_assert!((parent as usize) < self.parent.len());
        let id = self.parent.len() as u32;
        self.parent.push(parent);
        self.parent_weight.push(weight);
        self.children.push(Vec::new());
        self.children[parent as usize].push(id);
        id
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a rooted tree always has its root
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn parent(&self, v: u32) -> Option<u32> {
        if v == self.root {
            None
        } else {
            Some(self.parent[v as usize])
        }
    }

    pub fn parent_weight(&self, v: u32) -> f64 {
        self.parent_weight[v as usize]
    }

    pub fn children(&self, v: u32) -> &[u32] {
        &self.children[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.children[v as usize].len() + usize::from(v != self.root)
    }

    /// Sum of weights of edges incident to `v`.
    pub fn incident_weight(&self, v: u32) -> f64 {
        let mut s: f64 = self.children[v as usize]
            .iter()
            .map(|&c| self.parent_weight[c as usize])
            .sum();
        if v != self.root {
            s += self.parent_weight[v as usize];
        }
        s
    }

    /// Vertices within unweighted graph distance `r` of `center`, with their
    /// distances, in breadth-first discovery order.
    pub fn bfs_ball(&self, center: u32, r: u32) -> Result<Vec<(u32, u32)>> {
        if (center as usize) >= self.len() {
            return Err(Error::MissingVertex(center as usize));
        }
        let mut dist = vec![u32::MAX; self.len()];
        let mut out = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        dist[center as usize] = 0;
        queue.push_back(center);
        out.push((center, 0));
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize];
            if d == r {
                continue;
            }
            let mut push = |u: u32, dist: &mut Vec<u32>, out: &mut Vec<(u32, u32)>| {
                if dist[u as usize] == u32::MAX {
                    dist[u as usize] = d + 1;
                    out.push((u, d + 1));
                    queue.push_back(u);
                }
            };
            for &c in &self.children[v as usize] {
                push(c, &mut dist, &mut out);
            }
            if v != self.root {
                let p = self.parent[v as usize];
                push(p, &mut dist, &mut out);
            }
        }
        Ok(out)
    }

    /// Ball sizes |B(center, r)| for r = 0..=r_max.
    pub fn ball_profile(&self, center: u32, r_max: u32) -> Result<Vec<usize>> {
        let ball = self.bfs_ball(center, r_max)?;
        let mut profile = vec![0usize; r_max as usize + 1];
        for &(_, d) in &ball {
            profile[d as usize] += 1;
        }
        for r in 1..profile.len() {
            profile[r] += profile[r - 1];
        }
        Ok(profile)
    }

    fn farthest_from(&self, start: u32) -> (u32, u32) {
        let ball = self
            .bfs_ball(start, u32::MAX)
            .expect("start vertex is present");
        ball.into_iter()
            .max_by_key(|&(v, d)| (d, std::cmp::Reverse(v)))
            .expect("ball is nonempty")
    }

    /// Exact unweighted diameter via double BFS (valid on trees).
    pub fn diameter(&self) -> u32 {
        let (far, _) = self.farthest_from(self.root);
        let (_, d) = self.farthest_from(far);
        d
    }

    /// Plain-text export: header line then one `parent child weight` line per
    /// non-root vertex, 17 significant digits, vertices printed 1-based.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("# rooted-tree n={} root={}\n", self.len(), self.root + 1);
        for v in 0..self.len() as u32 {
            if v == self.root {
                continue;
            }
            s.push_str(&format!(
                "{} {} {:.17e}\n",
                self.parent[v as usize] + 1,
                v + 1,
                self.parent_weight[v as usize]
            ));
        }
        s
    }

    /// Parse the `to_edge_list` format.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Empty("edge list".into()))?;
        let mut n = None;
        let mut root = None;
        for tok in header.trim_start_matches('#').split_whitespace() {
            if let Some(v) = tok.strip_prefix("n=") {
                n = v.parse::<usize>().ok();
            }
            if let Some(v) = tok.strip_prefix("root=") {
                root = v.parse::<usize>().ok();
            }
        }
        let (n, root) = match (n, root) {
            (Some(n), Some(r)) if r == 1 && n >= 1 => (n, r - 1),
            _ => return domain_err("bad edge-list header (expect n=<count> root=1)"),
        };
        let mut parent = vec![u32::MAX; n];
        let mut weight = vec![0.0f64; n];
        parent[root] = root as u32;
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let (p, c, w) = match (it.next(), it.next(), it.next()) {
                (Some(p), Some(c), Some(w)) => (p, c, w),
                _ => return domain_err("bad edge line"),
            };
            let p: usize = p.parse().map_err(|_| Error::Domain("bad parent".into()))?;
            let c: usize = c.parse().map_err(|_| Error::Domain("bad child".into()))?;
            let w: f64 = w.parse().map_err(|_| Error::Domain("bad weight".into()))?;
            if p < 1 || p > n || c < 1 || c > n || c - 1 == root {
                return domain_err("vertex out of range");
            }
            parent[c - 1] = (p - 1) as u32;
            weight[c - 1] = w;
        }
        if parent.iter().any(|&p| p == u32::MAX) {
            return domain_err("edge list does not cover all vertices");
        }
        let mut tree = Self {
            parent,
            parent_weight: weight,
            children: vec![Vec::new(); n],
            root: root as u32,
        };
        for v in 0..n as u32 {
            if v != tree.root {
                let p = tree.parent[v as usize];
                tree.children[p as usize].push(v);
            }
        }
        Ok(tree)
    }
}
